//! Exact two-phase simplex over the rationals.
//!
//! Every outcome carries a certificate that [`verify_certificate`] checks
//! with plain arithmetic: a dual solution for optima, a feasible anchor plus
//! improving ray for unbounded problems, and Farkas multipliers for
//! infeasible ones. Pivoting uses Bland's rule, so solves are deterministic
//! and terminate on degenerate instances.
//!
//! Sign conventions for the certificates:
//!
//! * Farkas multipliers `y` are indexed by constraint. Each `≥` row is read
//!   as its negated `≤` form; `y_i ≥ 0` for inequality rows and free for
//!   equalities. The aggregate `Σ y_i s_i row_i · x ≤ Σ y_i s_i rhs_i`
//!   (`s_i = -1` for `≥` rows) must be violated by every point of the
//!   variable box.
//! * Optimal duals `π` follow the problem's sense: for a maximization,
//!   `π_i ≥ 0` on `≤` rows and `π_i ≤ 0` on `≥` rows; signs flip for
//!   minimization. Reduced costs `c - Aᵀπ` are paired with variable bounds.

use std::fmt::{self, Write as _};
use std::ops::Range;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactla::{fmt_rat, RVec, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bound {
    pub lower: Option<Rat>,
    pub upper: Option<Rat>,
}

impl Bound {
    pub fn free() -> Self {
        Bound::default()
    }

    pub fn nonneg() -> Self {
        Bound {
            lower: Some(Rat::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rat, upper: Rat) -> Self {
        Bound {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    fn contains(&self, v: &Rat) -> bool {
        self.lower.as_ref().is_none_or(|l| v >= l) && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub row: RVec,
    pub rel: Relation,
    pub rhs: Rat,
}

/// A linear program over named-by-index variables.
///
/// Declare all variables first, then add constraints; rows are stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: RVec,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LpProblem {
    pub fn new(sense: Sense) -> Self {
        LpProblem {
            sense,
            objective: RVec::zeros(0),
            constraints: Vec::new(),
            bounds: Vec::new(),
        }
    }

    /// Zero-objective problem over `nvars` variables with the given bound.
    pub fn feasibility(nvars: usize, bound: Bound) -> Self {
        let mut p = LpProblem::new(Sense::Minimize);
        p.add_vars(nvars, bound);
        p
    }

    pub fn nvars(&self) -> usize {
        self.bounds.len()
    }

    pub fn add_var(&mut self, bound: Bound) -> usize {
        self.add_vars(1, bound).start
    }

    pub fn add_vars(&mut self, n: usize, bound: Bound) -> Range<usize> {
        assert!(
            self.constraints.is_empty(),
            "variables must be declared before constraints"
        );
        let start = self.bounds.len();
        self.bounds.extend(std::iter::repeat_n(bound, n));
        let mut obj = self.objective.clone().into_inner();
        obj.resize(self.bounds.len(), Rat::zero());
        self.objective = RVec::new(obj);
        start..start + n
    }

    pub fn set_objective(&mut self, var: usize, coef: Rat) {
        let mut obj = std::mem::take(&mut self.objective).into_inner();
        obj[var] = coef;
        self.objective = RVec::new(obj);
    }

    /// Adds `Σ coef·x_var (rel) rhs`; repeated variables accumulate.
    pub fn add_terms<I>(&mut self, terms: I, rel: Relation, rhs: Rat)
    where
        I: IntoIterator<Item = (usize, Rat)>,
    {
        let mut row = vec![Rat::zero(); self.nvars()];
        for (v, c) in terms {
            row[v] += c;
        }
        self.constraints.push(Constraint {
            row: RVec::new(row),
            rel,
            rhs,
        });
    }

    pub fn add_row(&mut self, row: RVec, rel: Relation, rhs: Rat) {
        self.constraints.push(Constraint { row, rel, rhs });
    }

    fn validate(&self) -> Result<()> {
        let n = self.nvars();
        if self.objective.dim() != n {
            return Err(Error::Dimension {
                context: "LP objective",
                expected: n,
                found: self.objective.dim(),
            });
        }
        for c in &self.constraints {
            if c.row.dim() != n {
                return Err(Error::Dimension {
                    context: "LP constraint row",
                    expected: n,
                    found: c.row.dim(),
                });
            }
        }
        Ok(())
    }

    /// Human-readable dump, one constraint per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        let _ = writeln!(s, "{sense} {}", self.objective);
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = writeln!(s, "c{i}: {} {} {}", c.row, c.rel, fmt_rat(&c.rhs));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let lo = b.lower.as_ref().map_or("-inf".into(), fmt_rat);
            let hi = b.upper.as_ref().map_or("+inf".into(), fmt_rat);
            let _ = writeln!(s, "x{j} in [{lo}, {hi}]");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rat,
    pub primal: RVec,
    pub dual: RVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Farkas {
    pub multipliers: RVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Optimum),
    /// `anchor` is feasible and `anchor + t·ray` stays feasible for all `t ≥ 0`
    /// while the objective improves without bound.
    Unbounded {
        anchor: RVec,
        ray: RVec,
    },
    Infeasible(Farkas),
}

impl LpOutcome {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpOutcome::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal(_) => "optimal",
            LpOutcome::Unbounded { .. } => "unbounded",
            LpOutcome::Infeasible(_) => "infeasible",
        }
    }
}

/// Zero-objective solve; `Optimal` means feasible.
pub fn check_feasible(constraints: Vec<Constraint>, bounds: Vec<Bound>) -> Result<LpOutcome> {
    let p = LpProblem {
        sense: Sense::Minimize,
        objective: RVec::zeros(bounds.len()),
        constraints,
        bounds,
    };
    solve(&p)
}

// ---------------------------------------------------------------------------
// Solver

/// How an original variable maps onto nonnegative tableau columns.
enum ColMap {
    Shift { col: usize, lower: Rat },
    Mirror { col: usize, upper: Rat },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    /// Reduced costs followed by the negated objective value.
    obj: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
    artificial_from: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let inv = self.rows[r][k].recip();
        let nz: Vec<usize> = (0..=self.ncols)
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        for &j in &nz {
            self.rows[r][j] *= &inv;
        }
        let prow: Vec<(usize, Rat)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][k].is_zero() {
                continue;
            }
            let f = self.rows[i][k].clone();
            for (j, v) in &prow {
                self.rows[i][*j] -= &f * v;
            }
        }
        if !self.obj[k].is_zero() {
            let f = self.obj[k].clone();
            for (j, v) in &prow {
                self.obj[*j] -= &f * v;
            }
        }
        self.basis[r] = k;
    }

    fn set_costs(&mut self, costs: &[Rat]) {
        let mut obj: Vec<Rat> = costs.to_vec();
        obj.push(Rat::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Runs Bland-rule pivots to optimality. Returns the entering column
    /// when an unbounded direction is found.
    fn optimize(&mut self) -> Option<usize> {
        loop {
            let entering = (0..self.artificial_from).find(|&k| self.obj[k].is_negative());
            let k = entering?;
            let mut best: Option<(Rat, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][k];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                None => return Some(k),
                Some((_, r, _)) => self.pivot(r, k),
            }
        }
    }

    fn column_values(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs(i).clone();
        }
        v
    }
}

/// Solves `p` exactly.
pub fn solve(p: &LpProblem) -> Result<LpOutcome> {
    let outcome = solve_unaudited(p)?;
    if audit::enabled() {
        audit::record(verify_certificate(p, &outcome));
    }
    Ok(outcome)
}

/// Process-wide certificate audit. While enabled, every [`solve`] call
/// re-verifies its own outcome and the result is tallied.
pub mod audit {
    use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

    static ENABLED: AtomicBool = AtomicBool::new(false);
    static PASSED: AtomicU64 = AtomicU64::new(0);
    static FAILED: AtomicU64 = AtomicU64::new(0);

    #[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
    pub struct Tally {
        pub passed: u64,
        pub failed: u64,
    }

    pub fn enable() {
        ENABLED.store(true, Ordering::SeqCst);
    }

    pub fn disable() {
        ENABLED.store(false, Ordering::SeqCst);
    }

    pub fn enabled() -> bool {
        ENABLED.load(Ordering::Relaxed)
    }

    pub fn reset() {
        PASSED.store(0, Ordering::SeqCst);
        FAILED.store(0, Ordering::SeqCst);
    }

    pub fn tally() -> Tally {
        Tally {
            passed: PASSED.load(Ordering::SeqCst),
            failed: FAILED.load(Ordering::SeqCst),
        }
    }

    pub(super) fn record(ok: bool) {
        if ok {
            PASSED.fetch_add(1, Ordering::Relaxed);
        } else {
            FAILED.fetch_add(1, Ordering::Relaxed);
        }
    }
}

fn solve_unaudited(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.nvars();
    let flip = p.sense == Sense::Maximize;
    let cost: Vec<Rat> = p
        .objective
        .iter()
        .map(|c| if flip { -c } else { c.clone() })
        .collect();

    // Variables onto nonnegative columns; boxed variables get a bound row.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rat)> = Vec::new();
    for b in &p.bounds {
        match (&b.lower, &b.upper) {
            (Some(lo), up) => {
                if let Some(up) = up {
                    bound_rows.push((ncols, up - lo));
                }
                maps.push(ColMap::Shift {
                    col: ncols,
                    lower: lo.clone(),
                });
                ncols += 1;
            }
            (None, Some(up)) => {
                maps.push(ColMap::Mirror {
                    col: ncols,
                    upper: up.clone(),
                });
                ncols += 1;
            }
            (None, None) => {
                maps.push(ColMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }
    let nstruct = ncols;

    // Standard rows over structural columns: (coefs, rel, rhs).
    let mut std_rows: Vec<(Vec<Rat>, Relation, Rat)> = Vec::new();
    for c in &p.constraints {
        let mut coefs = vec![Rat::zero(); nstruct];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                ColMap::Shift { col, lower } => {
                    coefs[*col] += a;
                    rhs -= a * lower;
                }
                ColMap::Mirror { col, upper } => {
                    coefs[*col] -= a;
                    rhs -= a * upper;
                }
                ColMap::Split { pos, neg } => {
                    coefs[*pos] += a;
                    coefs[*neg] -= a;
                }
            }
        }
        std_rows.push((coefs, c.rel, rhs));
    }
    for (col, width) in &bound_rows {
        let mut coefs = vec![Rat::zero(); nstruct];
        coefs[*col] = Rat::one();
        std_rows.push((coefs, Relation::Le, width.clone()));
    }
    let m = std_rows.len();

    // Slack columns, then artificials only where no slack can start basic.
    let mut slack_of: Vec<Option<(usize, Rat)>> = Vec::with_capacity(m);
    for (_, rel, _) in &std_rows {
        let s = match rel {
            Relation::Le => Some((ncols, Rat::one())),
            Relation::Ge => Some((ncols, -Rat::one())),
            Relation::Eq => None,
        };
        if s.is_some() {
            ncols += 1;
        }
        slack_of.push(s);
    }
    let artificial_from = ncols;
    let mut negated = vec![false; m];
    let mut init_col = vec![0usize; m];
    let mut needs_art = vec![false; m];
    for i in 0..m {
        negated[i] = std_rows[i].2.is_negative();
        let slack_ok = matches!(&slack_of[i], Some((_, s)) if s.is_positive() != negated[i]);
        if slack_ok {
            init_col[i] = slack_of[i].as_ref().unwrap().0;
        } else {
            needs_art[i] = true;
            init_col[i] = ncols;
            ncols += 1;
        }
    }

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut r = vec![Rat::zero(); ncols + 1];
        let (coefs, _, rhs) = &std_rows[i];
        r[..nstruct].clone_from_slice(coefs);
        if let Some((col, s)) = &slack_of[i] {
            r[*col] = s.clone();
        }
        r[ncols] = rhs.clone();
        if negated[i] {
            for v in r.iter_mut() {
                *v = -&*v;
            }
        }
        if needs_art[i] {
            r[init_col[i]] = Rat::one();
        }
        rows.push(r);
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis: init_col.clone(),
        ncols,
        artificial_from,
    };

    // Phase 1.
    let mut phase1 = vec![Rat::zero(); ncols];
    for c in phase1.iter_mut().skip(artificial_from) {
        *c = Rat::one();
    }
    t.set_costs(&phase1);
    let unbounded = t.optimize();
    debug_assert!(unbounded.is_none(), "phase 1 is bounded below by 0");
    let infeasibility = -t.obj[ncols].clone();
    if infeasibility.is_positive() {
        // y_i = c_init - d_init; Farkas z = -y on the normalized rows.
        let mut mult = Vec::with_capacity(p.constraints.len());
        for (i, c) in p.constraints.iter().enumerate() {
            let y = &phase1[init_col[i]] - &t.obj[init_col[i]];
            let mut zeta = -y;
            if negated[i] {
                zeta = -zeta;
            }
            mult.push(match c.rel {
                Relation::Ge => -zeta,
                _ => zeta,
            });
        }
        return Ok(LpOutcome::Infeasible(Farkas {
            multipliers: RVec::new(mult),
        }));
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= artificial_from {
            if let Some(k) = (0..artificial_from).find(|&k| !t.rows[r][k].is_zero()) {
                t.pivot(r, k);
            }
        }
    }

    // Phase 2.
    let mut phase2 = vec![Rat::zero(); ncols];
    for (j, map) in maps.iter().enumerate() {
        let c = &cost[j];
        match map {
            ColMap::Shift { col, .. } => phase2[*col] = c.clone(),
            ColMap::Mirror { col, .. } => phase2[*col] = -c,
            ColMap::Split { pos, neg } => {
                phase2[*pos] = c.clone();
                phase2[*neg] = -c;
            }
        }
    }
    t.set_costs(&phase2);
    let to_x = |cols: &[Rat], with_offset: bool| -> RVec {
        maps.iter()
            .map(|map| match map {
                ColMap::Shift { col, lower } => {
                    if with_offset {
                        lower + &cols[*col]
                    } else {
                        cols[*col].clone()
                    }
                }
                ColMap::Mirror { col, upper } => {
                    if with_offset {
                        upper - &cols[*col]
                    } else {
                        -&cols[*col]
                    }
                }
                ColMap::Split { pos, neg } => &cols[*pos] - &cols[*neg],
            })
            .collect()
    };

    if let Some(k) = t.optimize() {
        let anchor = to_x(&t.column_values(), true);
        let mut dir = vec![Rat::zero(); ncols];
        dir[k] = Rat::one();
        for (i, &b) in t.basis.iter().enumerate() {
            dir[b] = -&t.rows[i][k];
        }
        let ray = to_x(&dir, false);
        return Ok(LpOutcome::Unbounded { anchor, ray });
    }

    let primal = to_x(&t.column_values(), true);
    let value = p.objective.dot(&primal);
    let dual: RVec = p
        .constraints
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let y = -&t.obj[init_col[i]];
            let pi = if negated[i] { -y } else { y };
            if flip {
                -pi
            } else {
                pi
            }
        })
        .collect();
    Ok(LpOutcome::Optimal(Optimum {
        value,
        primal,
        dual,
    }))
}

// ---------------------------------------------------------------------------
// Certificate checking

fn box_min(coefs: &RVec, bounds: &[Bound]) -> Option<Rat> {
    let mut acc = Rat::zero();
    for (c, b) in coefs.iter().zip(bounds) {
        if c.is_zero() {
            continue;
        }
        let end = if c.is_positive() { &b.lower } else { &b.upper };
        acc += c * end.as_ref()?;
    }
    Some(acc)
}

fn satisfies(c: &Constraint, x: &RVec) -> bool {
    let lhs = c.row.dot(x);
    match c.rel {
        Relation::Le => lhs <= c.rhs,
        Relation::Eq => lhs == c.rhs,
        Relation::Ge => lhs >= c.rhs,
    }
}

pub fn is_feasible_point(p: &LpProblem, x: &RVec) -> bool {
    x.dim() == p.nvars()
        && p.constraints.iter().all(|c| satisfies(c, x))
        && p.bounds.iter().zip(x.iter()).all(|(b, v)| b.contains(v))
}

/// Re-checks `o` against `p` using only arithmetic.
pub fn verify_certificate(p: &LpProblem, o: &LpOutcome) -> bool {
    if p.validate().is_err() {
        return false;
    }
    let m = p.constraints.len();
    match o {
        LpOutcome::Optimal(opt) => {
            if !is_feasible_point(p, &opt.primal)
                || p.objective.dot(&opt.primal) != opt.value
                || opt.dual.dim() != m
            {
                return false;
            }
            // Work in minimization form.
            let flip = p.sense == Sense::Maximize;
            let pi: Vec<Rat> = opt
                .dual
                .iter()
                .map(|d| if flip { -d } else { d.clone() })
                .collect();
            let signs_ok = p.constraints.iter().zip(&pi).all(|(c, d)| match c.rel {
                Relation::Ge => !d.is_negative(),
                Relation::Le => !d.is_positive(),
                Relation::Eq => true,
            });
            if !signs_ok {
                return false;
            }
            let mut reduced: Vec<Rat> = p
                .objective
                .iter()
                .map(|c| if flip { -c } else { c.clone() })
                .collect();
            for (c, d) in p.constraints.iter().zip(&pi) {
                if d.is_zero() {
                    continue;
                }
                for (r, a) in reduced.iter_mut().zip(c.row.iter()) {
                    *r -= d * a;
                }
            }
            let Some(bmin) = box_min(&RVec::new(reduced), &p.bounds) else {
                return false;
            };
            let dual_value: Rat = p
                .constraints
                .iter()
                .zip(&pi)
                .map(|(c, d)| d * &c.rhs)
                .sum::<Rat>()
                + bmin;
            let primal_min = if flip { -&opt.value } else { opt.value.clone() };
            dual_value == primal_min
        }
        LpOutcome::Unbounded { anchor, ray } => {
            if !is_feasible_point(p, anchor) || ray.dim() != p.nvars() || ray.is_zero() {
                return false;
            }
            let rows_ok = p.constraints.iter().all(|c| {
                let v = c.row.dot(ray);
                match c.rel {
                    Relation::Le => !v.is_positive(),
                    Relation::Eq => v.is_zero(),
                    Relation::Ge => !v.is_negative(),
                }
            });
            let bounds_ok = p.bounds.iter().zip(ray.iter()).all(|(b, v)| {
                (b.lower.is_none() || !v.is_negative()) && (b.upper.is_none() || !v.is_positive())
            });
            let gain = p.objective.dot(ray);
            let improving = match p.sense {
                Sense::Maximize => gain.is_positive(),
                Sense::Minimize => gain.is_negative(),
            };
            rows_ok && bounds_ok && improving
        }
        LpOutcome::Infeasible(f) => verify_farkas(p, f),
    }
}

pub fn verify_farkas(p: &LpProblem, f: &Farkas) -> bool {
    if f.multipliers.dim() != p.constraints.len() {
        return false;
    }
    let mut agg = RVec::zeros(p.nvars());
    let mut beta = Rat::zero();
    for (c, y) in p.constraints.iter().zip(f.multipliers.iter()) {
        if c.rel != Relation::Eq && y.is_negative() {
            return false;
        }
        let w = if c.rel == Relation::Ge { -y } else { y.clone() };
        if w.is_zero() {
            continue;
        }
        agg = agg.axpy(&w, &c.row);
        beta += &w * &c.rhs;
    }
    matches!(box_min(&agg, &p.bounds), Some(lo) if lo > beta)
}
