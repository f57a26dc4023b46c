//! Exact rational linear programming.
//!
//! [`solve_lp`] is a two-phase primal simplex using Bland's rule on a
//! condensed tableau (one row per inequality, one column per nonbasic
//! variable), so problems with many more rows than columns stay small.
//! Phase one uses a single auxiliary variable. Every quantity is a
//! [`Rational`], so results are exact and the pivot sequence is fully
//! deterministic.
//!
//! [`solve_01`] adds depth-first branch and bound on top, branching on the
//! lowest-index fractional integral variable, down-branch first.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .fold(zero(), |acc, (a, v)| acc + a * v)
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    integral: Vec<bool>,
}

impl LinearProgram {
    /// All variables start with bounds `[0, ∞)`, zero cost, continuous.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        Self {
            num_vars,
            sense,
            objective: vec![zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![zero(); num_vars],
            upper: vec![None; num_vars],
            integral: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[Option<Rational>] {
        &self.upper
    }

    pub fn integrality(&self) -> &[bool] {
        &self.integral
    }

    pub fn set_objective_coeff(&mut self, var: usize, c: Rational) {
        self.objective[var] = c;
    }

    pub fn set_objective(&mut self, c: Vec<Rational>) {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "coefficient vector length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Adds a constraint from `(variable, coefficient)` pairs; repeated
    /// variables accumulate.
    pub fn add_sparse_constraint(
        &mut self,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) {
        let mut coeffs = vec![zero(); self.num_vars];
        for (j, a) in terms {
            coeffs[*j] += a;
        }
        self.add_constraint(coeffs, relation, rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lower: Rational, upper: Option<Rational>) {
        if let Some(u) = &upper {
            assert!(&lower <= u, "lower bound exceeds upper bound");
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_integral(&mut self, var: usize, integral: bool) {
        self.integral[var] = integral;
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .fold(zero(), |acc, (c, v)| acc + c * v)
    }

    /// Constraints and variable bounds hold exactly at `x`.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && x.iter()
                .zip(&self.upper)
                .all(|(v, u)| u.as_ref().is_none_or(|u| v <= u))
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint, signed so that
    /// `objective = Σ dual_i · coeffs_i + bound_dual + reduced costs`.
    /// Empty unless the solve was a pure LP that reached optimality.
    pub dual: Vec<Rational>,
    /// Multipliers on the finite upper bounds (zero where a variable has none).
    pub bound_dual: Vec<Rational>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            value: zero(),
            primal: Vec::new(),
            dual: Vec::new(),
            bound_dual: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Where an internal `≤` row came from.
#[derive(Clone, Copy)]
enum RowOrigin {
    Constraint { index: usize, negated: bool },
    UpperBound { var: usize },
}

struct Tableau {
    // basic[r] = rhs[r] - Σ_k tab[r][k] · nonbasic[k]
    tab: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    // objectives to maximize: value = constant + Σ_k coeff[k] · nonbasic[k]
    obj: Vec<Rational>,
    obj_const: Rational,
    aux: Option<(Vec<Rational>, Rational)>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.tab[r][j].clone();
        let inv = one() / &p;
        for k in 0..self.tab[r].len() {
            if k == j {
                self.tab[r][k] = inv.clone();
            } else if !self.tab[r][k].is_zero() {
                self.tab[r][k] = &self.tab[r][k] / &p;
            }
        }
        self.rhs[r] = &self.rhs[r] / &p;

        let pivot_row = self.tab[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&k| k != j && !pivot_row[k].is_zero())
            .collect();
        for i in 0..self.tab.len() {
            if i == r || self.tab[i][j].is_zero() {
                continue;
            }
            let f = self.tab[i][j].clone();
            for &k in &nz {
                let d = &f * &pivot_row[k];
                self.tab[i][k] -= d;
            }
            self.tab[i][j] = -(&f * &inv);
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &f * &pivot_rhs;
            }
        }
        update_objective(
            &mut self.obj,
            &mut self.obj_const,
            &pivot_row,
            &pivot_rhs,
            j,
            &inv,
        );
        if let Some((aux, aux_const)) = &mut self.aux {
            update_objective(aux, aux_const, &pivot_row, &pivot_rhs, j, &inv);
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[j]);
    }

    /// Bland's rule iterations on the auxiliary objective if present, else the
    /// real one.
    fn optimize(&mut self, use_aux: bool) -> Outcome {
        loop {
            let coeffs = if use_aux {
                &self.aux.as_ref().unwrap().0
            } else {
                &self.obj
            };
            let entering = (0..self.nonbasic.len())
                .filter(|&k| coeffs[k].is_positive())
                .min_by_key(|&k| self.nonbasic[k]);
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.tab.len() {
                if !self.tab[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basic[i] < self.basic[*best_i])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn value_of(&self, var: usize) -> Rational {
        match self.basic.iter().position(|&b| b == var) {
            Some(r) => self.rhs[r].clone(),
            None => zero(),
        }
    }
}

fn update_objective(
    obj: &mut [Rational],
    constant: &mut Rational,
    pivot_row: &[Rational],
    pivot_rhs: &Rational,
    j: usize,
    inv: &Rational,
) {
    let f = obj[j].clone();
    if f.is_zero() {
        return;
    }
    *constant += &f * pivot_rhs;
    for (k, a) in pivot_row.iter().enumerate() {
        if k != j && !a.is_zero() {
            obj[k] -= &f * a;
        }
    }
    obj[j] = -(&f * inv);
}

/// Solves a continuous LP exactly. Integrality flags are ignored.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    solve_relaxation(lp, &lp.lower, &lp.upper)
}

fn solve_relaxation(
    lp: &LinearProgram,
    lower: &[Rational],
    upper: &[Option<Rational>],
) -> LpSolution {
    let n = lp.num_vars;
    for j in 0..n {
        if let Some(u) = &upper[j] {
            if u < &lower[j] {
                return LpSolution::without_point(LpStatus::Infeasible);
            }
        }
    }
    // Fixed variables are substituted out; the rest are shifted to x' = x - l.
    let free: Vec<usize> = (0..n)
        .filter(|&j| upper[j].as_ref() != Some(&lower[j]))
        .collect();
    let col_of: Vec<Option<usize>> = {
        let mut m = vec![None; n];
        for (c, &j) in free.iter().enumerate() {
            m[j] = Some(c);
        }
        m
    };

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut origin: Vec<RowOrigin> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let shifted = &c.rhs - c.lhs(lower);
        let compact: Vec<Rational> = free.iter().map(|&j| c.coeffs[j].clone()).collect();
        let mut push = |negated: bool| {
            if negated {
                rows.push(compact.iter().map(|a| -a).collect());
                rhs.push(-shifted.clone());
            } else {
                rows.push(compact.clone());
                rhs.push(shifted.clone());
            }
            origin.push(RowOrigin::Constraint { index: i, negated });
        };
        match c.relation {
            Relation::Le => push(false),
            Relation::Ge => push(true),
            Relation::Eq => {
                push(false);
                push(true);
            }
        }
    }
    for &j in &free {
        if let Some(u) = &upper[j] {
            let mut row = vec![zero(); free.len()];
            row[col_of[j].unwrap()] = one();
            rows.push(row);
            rhs.push(u - &lower[j]);
            origin.push(RowOrigin::UpperBound { var: j });
        }
    }

    let sign = match lp.sense {
        Sense::Maximize => one(),
        Sense::Minimize => -one(),
    };
    let obj: Vec<Rational> = free.iter().map(|&j| &sign * &lp.objective[j]).collect();
    let obj_const = &sign * lp.objective_value(lower);

    let m = rows.len();
    let cols = free.len();
    let mut t = Tableau {
        tab: rows,
        rhs,
        basic: (cols..cols + m).collect(),
        nonbasic: (0..cols).collect(),
        obj,
        obj_const,
        aux: None,
    };

    // Phase one: one auxiliary variable (id cols + m) added to every row.
    let most_negative = (0..m)
        .filter(|&r| t.rhs[r].is_negative())
        .min_by(|&a, &b| t.rhs[a].cmp(&t.rhs[b]).then(t.basic[a].cmp(&t.basic[b])));
    if let Some(r0) = most_negative {
        let aux_id = cols + m;
        for row in &mut t.tab {
            row.push(-one());
        }
        t.obj.push(zero());
        t.nonbasic.push(aux_id);
        let mut aux = vec![zero(); cols + 1];
        aux[cols] = -one();
        t.aux = Some((aux, zero()));
        t.pivot(r0, cols);
        t.optimize(true);
        if t.aux.as_ref().unwrap().1.is_negative() {
            return LpSolution::without_point(LpStatus::Infeasible);
        }
        if let Some(r) = t.basic.iter().position(|&b| b == aux_id) {
            // Degenerate: drive the auxiliary variable out of the basis.
            let j = (0..t.nonbasic.len())
                .filter(|&k| !t.tab[r][k].is_zero())
                .min_by_key(|&k| t.nonbasic[k])
                .expect("auxiliary row has a nonzero entry");
            t.pivot(r, j);
        }
        let k = t.nonbasic.iter().position(|&v| v == aux_id).unwrap();
        for row in &mut t.tab {
            row.remove(k);
        }
        t.obj.remove(k);
        t.nonbasic.remove(k);
        t.aux = None;
    }

    if let Outcome::Unbounded = t.optimize(false) {
        return LpSolution::without_point(LpStatus::Unbounded);
    }

    let mut primal = lower.to_vec();
    for (c, &j) in free.iter().enumerate() {
        primal[j] = &lower[j] + t.value_of(c);
    }
    let value = lp.objective_value(&primal);
    debug_assert_eq!(value, &sign * &t.obj_const);

    // Row multipliers u_r >= 0 of the internal max problem.
    let mut dual = vec![zero(); lp.constraints.len()];
    let mut bound_dual = vec![zero(); n];
    for (k, &var) in t.nonbasic.iter().enumerate() {
        if var < cols {
            continue;
        }
        let r = var - cols;
        let u = -&t.obj[k];
        if u.is_zero() {
            continue;
        }
        match origin[r] {
            RowOrigin::Constraint { index, negated } => {
                let y = if negated { -(&sign * &u) } else { &sign * &u };
                dual[index] += y;
            }
            RowOrigin::UpperBound { var } => bound_dual[var] += &sign * &u,
        }
    }

    LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
        bound_dual,
    }
}

/// Checks an optimal LP solution against its dual certificate: primal
/// feasibility, dual sign conditions, reduced-cost signs and equal objectives.
pub fn certificate_holds(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal || !lp.is_feasible(&sol.primal) {
        return false;
    }
    if lp.objective_value(&sol.primal) != sol.value {
        return false;
    }
    let minimize = lp.sense == Sense::Minimize;
    // For minimization the Lagrangian multipliers are >= 0 on ≥ rows; flip for max.
    let sign_ok = |y: &Rational, rel: Relation| match (rel, minimize) {
        (Relation::Eq, _) => true,
        (Relation::Ge, true) | (Relation::Le, false) => !y.is_negative(),
        (Relation::Le, true) | (Relation::Ge, false) => !y.is_positive(),
    };
    if !lp
        .constraints
        .iter()
        .zip(&sol.dual)
        .all(|(c, y)| sign_ok(y, c.relation))
    {
        return false;
    }
    let mut dual_obj = zero();
    for (c, y) in lp.constraints.iter().zip(&sol.dual) {
        dual_obj += y * &c.rhs;
    }
    for j in 0..lp.num_vars {
        let w = &sol.bound_dual[j];
        match &lp.upper[j] {
            Some(u) => {
                if !sign_ok(w, Relation::Le) {
                    return false;
                }
                dual_obj += w * u;
            }
            None => {
                if !w.is_zero() {
                    return false;
                }
            }
        }
        let mut reduced = lp.objective[j].clone() - w;
        for (c, y) in lp.constraints.iter().zip(&sol.dual) {
            reduced -= y * &c.coeffs[j];
        }
        // reduced cost acts as the multiplier of x_j >= l_j
        if !sign_ok(&reduced, Relation::Ge) {
            return false;
        }
        dual_obj += reduced * &lp.lower[j];
    }
    dual_obj == sol.value
}

/// Integer-constrained solve by depth-first branch and bound over LP
/// relaxations. Branches on the lowest-index integral variable with a
/// fractional value, exploring `x <= floor` before `x >= ceil`.
pub fn solve_01(lp: &LinearProgram) -> LpSolution {
    let minimize = lp.sense == Sense::Minimize;
    let integral_objective = lp
        .objective
        .iter()
        .zip(&lp.integral)
        .all(|(c, &int)| c.is_zero() || (int && c.is_integer()));

    let mut best: Option<LpSolution> = None;
    let mut saw_unbounded = false;
    let mut stack: Vec<(Vec<Rational>, Vec<Option<Rational>>)> =
        vec![(lp.lower.clone(), lp.upper.clone())];

    while let Some((lower, upper)) = stack.pop() {
        let relaxed = solve_relaxation(lp, &lower, &upper);
        match relaxed.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                saw_unbounded = true;
                continue;
            }
            LpStatus::Optimal => {}
        }
        if let Some(inc) = &best {
            let bound = if integral_objective {
                if minimize {
                    relaxed.value.ceil()
                } else {
                    relaxed.value.floor()
                }
            } else {
                relaxed.value.clone()
            };
            let pruned = if minimize {
                bound >= inc.value
            } else {
                bound <= inc.value
            };
            if pruned {
                continue;
            }
        }
        let fractional =
            (0..lp.num_vars).find(|&j| lp.integral[j] && !relaxed.primal[j].is_integer());
        match fractional {
            None => {
                best = Some(LpSolution {
                    dual: Vec::new(),
                    bound_dual: Vec::new(),
                    ..relaxed
                });
            }
            Some(j) => {
                let v = &relaxed.primal[j];
                let mut up_lower = lower.clone();
                up_lower[j] = v.ceil();
                let mut down_upper = upper.clone();
                down_upper[j] = Some(v.floor());
                // pushed last, popped first
                stack.push((up_lower, upper));
                stack.push((lower, down_upper));
            }
        }
    }
    match best {
        Some(s) => s,
        None if saw_unbounded => LpSolution::without_point(LpStatus::Unbounded),
        None => LpSolution::without_point(LpStatus::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_lower_bound_row() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.set_objective(v(&[1]));
        lp.add_constraint(v(&[1]), Relation::Ge, int(1));
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(1));
        assert!(certificate_holds(&lp, &s));
    }

    #[test]
    fn fmp_of_four_cycle() {
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        lp.set_objective(v(&[1, 1, 1, 1]));
        lp.add_constraint(v(&[1, 0, 1, 0]), Relation::Ge, int(1));
        lp.add_constraint(v(&[0, 1, 0, 1]), Relation::Ge, int(1));
        let s = solve_lp(&lp);
        assert_eq!(s.value, int(2));
        assert!(certificate_holds(&lp, &s));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.add_constraint(v(&[1]), Relation::Le, int(-1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(v(&[1, 0]));
        lp.add_constraint(v(&[1, -1]), Relation::Le, int(1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_bounds() {
        // max x + y, x + 2y = 3, x <= 2, y >= 1/4
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(v(&[1, 1]));
        lp.add_constraint(v(&[1, 2]), Relation::Eq, int(3));
        lp.set_bounds(0, int(0), Some(int(2)));
        lp.set_bounds(1, frac(1, 4), None);
        let s = solve_lp(&lp);
        assert_eq!(s.primal, vec![int(2), frac(1, 2)]);
        assert_eq!(s.value, frac(5, 2));
        assert!(certificate_holds(&lp, &s));
    }

    #[test]
    fn negative_lower_bound() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.set_objective(v(&[1]));
        lp.set_bounds(0, int(-3), Some(int(5)));
        let s = solve_lp(&lp);
        assert_eq!(s.value, int(-3));
        assert!(certificate_holds(&lp, &s));
    }

    #[test]
    fn branch_and_bound_closes_gap() {
        // min y1+y2+y3 with pairwise covers: LP 3/2, integer 2
        let mut lp = LinearProgram::new(3, Sense::Minimize);
        lp.set_objective(v(&[1, 1, 1]));
        for pair in [[1, 1, 0], [0, 1, 1], [1, 0, 1]] {
            lp.add_constraint(v(&pair), Relation::Ge, int(1));
        }
        for j in 0..3 {
            lp.set_bounds(j, int(0), Some(int(1)));
            lp.set_integral(j, true);
        }
        assert_eq!(solve_lp(&lp).value, frac(3, 2));
        let s = solve_01(&lp);
        assert_eq!(s.value, int(2));
        assert!(s.primal.iter().all(|x| x.is_integer()));
        assert!(lp.is_feasible(&s.primal));
    }
}
