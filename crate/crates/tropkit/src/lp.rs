//! Exact rational linear programming: a dense two-phase simplex with Bland's
//! rule. Problems here are tiny (a handful of rows, up to a few hundred
//! columns), so a textbook tableau over `BigRational` is the right tool.

use num::{One, Signed, Zero};

use crate::scalar::Rat;

/// `maximize c·x` subject to `A_eq x = b_eq`, `A_le x <= b_le`, `x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub eq: Vec<(Vec<Rat>, Rat)>,
    pub le: Vec<(Vec<Rat>, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, solution: Vec<Rat> },
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            eq: Vec::new(),
            le: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, c: Vec<Rat>) {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
    }

    pub fn add_eq(&mut self, row: Vec<Rat>, rhs: Rat) {
        assert_eq!(row.len(), self.num_vars);
        self.eq.push((row, rhs));
    }

    pub fn add_le(&mut self, row: Vec<Rat>, rhs: Rat) {
        assert_eq!(row.len(), self.num_vars);
        self.le.push((row, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve()
    }
}

/// Solve with all variables free (unrestricted in sign) by the usual
/// `v = v⁺ − v⁻` split; the returned solution is in the free variables.
pub fn solve_free(
    objective: &[Rat],
    eq: &[(Vec<Rat>, Rat)],
    le: &[(Vec<Rat>, Rat)],
) -> LpOutcome {
    let n = objective.len();
    let split = |row: &[Rat]| -> Vec<Rat> {
        let mut out = Vec::with_capacity(2 * n);
        for c in row {
            out.push(c.clone());
        }
        for c in row {
            out.push(-c.clone());
        }
        out
    };
    let mut lp = LinearProgram::new(2 * n);
    lp.set_objective(split(objective));
    for (row, rhs) in eq {
        lp.add_eq(split(row), rhs.clone());
    }
    for (row, rhs) in le {
        lp.add_le(split(row), rhs.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, solution } => {
            let merged: Vec<Rat> =
                (0..n).map(|j| solution[j].clone() - solution[n + j].clone()).collect();
            LpOutcome::Optimal { value, solution: merged }
        }
        other => other,
    }
}

struct Tableau {
    /// rows[i] has `total` coefficient columns followed by the rhs.
    rows: Vec<Vec<Rat>>,
    basic: Vec<usize>,
    num_structural: usize,
    num_slack: usize,
    num_artificial: usize,
    objective: Vec<Rat>,
}

impl Tableau {
    fn build(p: &LinearProgram) -> Tableau {
        let m = p.eq.len() + p.le.len();
        let num_structural = p.num_vars;
        let num_slack = p.le.len();
        // Assemble raw rows: structural | slack | rhs (artificials appended later).
        let width = num_structural + num_slack;
        let mut raw: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut slack_of_row: Vec<Option<usize>> = Vec::with_capacity(m);
        for (row, rhs) in &p.eq {
            let mut r = vec![Rat::zero(); width + 1];
            r[..num_structural].clone_from_slice(row);
            r[width] = rhs.clone();
            raw.push(r);
            slack_of_row.push(None);
        }
        for (k, (row, rhs)) in p.le.iter().enumerate() {
            let mut r = vec![Rat::zero(); width + 1];
            r[..num_structural].clone_from_slice(row);
            r[num_structural + k] = Rat::one();
            r[width] = rhs.clone();
            raw.push(r);
            slack_of_row.push(Some(num_structural + k));
        }
        // Normalize to nonnegative rhs; decide which rows need artificials.
        let mut needs_artificial = Vec::with_capacity(m);
        for (i, r) in raw.iter_mut().enumerate() {
            if r[width].is_negative() {
                for c in r.iter_mut() {
                    *c = -c.clone();
                }
                needs_artificial.push(true);
            } else {
                needs_artificial.push(slack_of_row[i].is_none());
            }
        }
        let num_artificial = needs_artificial.iter().filter(|&&b| b).count();
        let total = width + num_artificial;
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut basic = Vec::with_capacity(m);
        let mut next_art = width;
        for (i, r) in raw.into_iter().enumerate() {
            let mut full = vec![Rat::zero(); total + 1];
            full[..width].clone_from_slice(&r[..width]);
            full[total] = r[width].clone();
            if needs_artificial[i] {
                full[next_art] = Rat::one();
                basic.push(next_art);
                next_art += 1;
            } else {
                basic.push(slack_of_row[i].expect("slack-basic row"));
            }
            rows.push(full);
        }
        let mut objective = vec![Rat::zero(); total];
        objective[..num_structural].clone_from_slice(&p.objective);
        Tableau { rows, basic, num_structural, num_slack, num_artificial, objective }
    }

    fn total(&self) -> usize {
        self.num_structural + self.num_slack + self.num_artificial
    }

    fn solve(mut self) -> LpOutcome {
        let total = self.total();
        if self.num_artificial > 0 {
            // Phase 1: maximize minus the sum of artificials.
            let mut phase1 = vec![Rat::zero(); total];
            for j in (total - self.num_artificial)..total {
                phase1[j] = -Rat::one();
            }
            let (obj_row, obj_val) = self.priced_objective(&phase1);
            match self.pivot_loop(obj_row, obj_val, Some(total - self.num_artificial)) {
                PivotResult::Unbounded => unreachable!("phase 1 is bounded"),
                PivotResult::Optimal(v) => {
                    if !v.is_zero() {
                        return LpOutcome::Infeasible;
                    }
                }
            }
            self.evict_artificials();
        }
        let total = self.total();
        let objective = self.objective.clone();
        let (obj_row, obj_val) = self.priced_objective(&objective);
        match self.pivot_loop(obj_row, obj_val, None) {
            PivotResult::Unbounded => LpOutcome::Unbounded,
            PivotResult::Optimal(value) => {
                let mut solution = vec![Rat::zero(); self.num_structural];
                for (i, &b) in self.basic.iter().enumerate() {
                    if b < self.num_structural {
                        solution[b] = self.rows[i][total].clone();
                    }
                }
                LpOutcome::Optimal { value, solution }
            }
        }
    }

    /// Reduced-cost row for a cost vector (price out current basics).
    fn priced_objective(&self, cost: &[Rat]) -> (Vec<Rat>, Rat) {
        let total = self.total();
        let mut row = cost.to_vec();
        let mut val = Rat::zero();
        for (i, &b) in self.basic.iter().enumerate() {
            if row[b].is_zero() {
                continue;
            }
            let factor = row[b].clone();
            for j in 0..total {
                let delta = &factor * &self.rows[i][j];
                row[j] -= delta;
            }
            val += factor * &self.rows[i][total];
        }
        (row, val)
    }

    /// Bland-rule pivoting until optimal or unbounded. Columns at or beyond
    /// `forbid_from` (artificials during phase 2 cleanup) may never enter.
    fn pivot_loop(
        &mut self,
        mut obj: Vec<Rat>,
        mut obj_val: Rat,
        forbid_from: Option<usize>,
    ) -> PivotResult {
        let total = self.total();
        let limit = forbid_from.unwrap_or(total);
        loop {
            let entering = (0..limit).find(|&j| obj[j].is_positive());
            let Some(col) = entering else {
                return PivotResult::Optimal(obj_val);
            };
            // Minimum ratio with Bland tie-break on the basic variable index.
            let mut best: Option<(Rat, usize, usize)> = None; // (ratio, basic idx, row)
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rows[i][total] / &self.rows[i][col];
                    let cand = (ratio, self.basic[i], i);
                    best = match best {
                        None => Some(cand),
                        Some(cur) => {
                            if cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 < cur.1) {
                                Some(cand)
                            } else {
                                Some(cur)
                            }
                        }
                    };
                }
            }
            let Some((_, _, row)) = best else {
                return PivotResult::Unbounded;
            };
            self.pivot(row, col, &mut obj, &mut obj_val);
        }
    }

    fn pivot(&mut self, row: usize, col: usize, obj: &mut [Rat], obj_val: &mut Rat) {
        let total = self.total();
        let pivot = self.rows[row][col].clone();
        for j in 0..=total {
            self.rows[row][j] = &self.rows[row][j] / &pivot;
        }
        for i in 0..self.rows.len() {
            if i != row && !self.rows[i][col].is_zero() {
                let factor = self.rows[i][col].clone();
                for j in 0..=total {
                    let delta = &factor * &self.rows[row][j];
                    self.rows[i][j] -= delta;
                }
            }
        }
        if !obj[col].is_zero() {
            let factor = obj[col].clone();
            for j in 0..total {
                let delta = &factor * &self.rows[row][j];
                obj[j] -= delta;
            }
            *obj_val += factor * &self.rows[row][total];
        }
        self.basic[row] = col;
    }

    /// After a feasible phase 1, pivot artificial variables out of the basis
    /// (or drop redundant rows), then drop the artificial columns.
    fn evict_artificials(&mut self) {
        let total = self.total();
        let art_start = total - self.num_artificial;
        let mut dead_rows = Vec::new();
        for i in 0..self.rows.len() {
            if self.basic[i] >= art_start {
                let col = (0..art_start).find(|&j| !self.rows[i][j].is_zero());
                match col {
                    Some(col) => {
                        let mut dummy = vec![Rat::zero(); total];
                        let mut dummy_val = Rat::zero();
                        self.pivot(i, col, &mut dummy, &mut dummy_val);
                    }
                    None => dead_rows.push(i),
                }
            }
        }
        for &i in dead_rows.iter().rev() {
            self.rows.remove(i);
            self.basic.remove(i);
        }
        for r in &mut self.rows {
            let rhs = r.pop().expect("rhs");
            r.truncate(art_start);
            r.push(rhs);
        }
        self.num_artificial = 0;
    }
}

enum PivotResult {
    Optimal(Rat),
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn simple_bounded_maximum() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
        let mut lp = LinearProgram::new(2);
        lp.set_objective(r(&[1, 1]));
        lp.add_le(r(&[1, 2]), rat(4));
        lp.add_le(r(&[3, 1]), rat(6));
        let LpOutcome::Optimal { value, solution } = lp.solve() else {
            panic!("expected optimum");
        };
        assert_eq!(value, ratio(14, 5));
        assert_eq!(solution, vec![ratio(8, 5), ratio(6, 5)]);
    }

    #[test]
    fn equality_constraints() {
        // max y s.t. x + y = 2, x <= 1 -> y = 2 at x = 0.
        let mut lp = LinearProgram::new(2);
        lp.set_objective(r(&[0, 1]));
        lp.add_eq(r(&[1, 1]), rat(2));
        lp.add_le(r(&[1, 0]), rat(1));
        let LpOutcome::Optimal { value, .. } = lp.solve() else {
            panic!("expected optimum");
        };
        assert_eq!(value, rat(2));
    }

    #[test]
    fn detects_infeasibility() {
        // x >= 0 with x <= -1 cannot hold.
        let mut lp = LinearProgram::new(1);
        lp.add_le(r(&[1]), rat(-1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(r(&[1]));
        lp.add_le(r(&[-1]), rat(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variable_split() {
        // max -x (x free) s.t. x >= -3 expressed as -x <= 3: optimum 3 at x = -3.
        let out = solve_free(&r(&[-1]), &[], &[(r(&[-1]), rat(3))]);
        let LpOutcome::Optimal { value, solution } = out else {
            panic!("expected optimum");
        };
        assert_eq!(value, rat(3));
        assert_eq!(solution, vec![rat(-3)]);
    }

    #[test]
    fn redundant_equalities_survive_phase_one() {
        // x + y = 2 stated twice; max x s.t. x <= 5 intersect the line.
        let mut lp = LinearProgram::new(2);
        lp.set_objective(r(&[1, 0]));
        lp.add_eq(r(&[1, 1]), rat(2));
        lp.add_eq(r(&[2, 2]), rat(4));
        let LpOutcome::Optimal { value, .. } = lp.solve() else {
            panic!("expected optimum");
        };
        assert_eq!(value, rat(2));
    }
}
