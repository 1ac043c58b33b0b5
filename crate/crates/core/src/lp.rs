//! Exact two-phase simplex with Bland's rule over free variables.
//!
//! Constraints are affine functionals `a·x + c` required to be `>= 0` or `= 0`.

use num_traits::{Signed, Zero};

use crate::polyhedron::Affine;
use crate::scalar::Rat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    /// Objective unbounded above; carries some feasible point.
    Unbounded(Vec<Rat>),
    Optimal {
        value: Rat,
        point: Vec<Rat>,
    },
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded(p) => Some(p),
            LpOutcome::Optimal { point, .. } => Some(point),
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    obj: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rat::from_integer(1.into()) / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Sets the objective to maximize `cost` (length `ncols`).
    fn set_objective(&mut self, cost: &[Rat]) {
        let mut obj: Vec<Rat> = cost.iter().map(|c| -c).collect();
        obj.push(Rat::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let f = cost[b].clone();
                for (x, v) in obj.iter_mut().zip(&self.rows[r]) {
                    *x += &f * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Runs simplex iterations; `false` means unbounded.
    fn run(&mut self, allowed: &[bool]) -> bool {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.ncols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn values(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            v[b] = self.rows[r][self.ncols].clone();
        }
        v
    }
}

/// Maximizes `objective · x` subject to `eqs = 0` and `ineqs >= 0`.
pub fn maximize(dim: usize, eqs: &[Affine], ineqs: &[Affine], objective: &[Rat]) -> LpOutcome {
    let mi = ineqs.len();
    let m = mi + eqs.len();
    // columns: u (dim), v (dim), slacks (mi), artificials (<= m)
    let base = 2 * dim + mi;
    let mut need_art = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    for (i, f) in ineqs.iter().chain(eqs).enumerate() {
        let mut row = vec![Rat::zero(); base];
        for j in 0..dim {
            row[j] = f.a[j].clone();
            row[dim + j] = -&f.a[j];
        }
        let mut rhs = -&f.c;
        if i < mi {
            row[2 * dim + i] = -Rat::from_integer(1.into());
        }
        // make rhs nonnegative; an inequality with rhs <= 0 gets a basic slack
        if rhs.is_negative() || (i < mi && rhs.is_zero()) {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            rhs = -rhs;
        }
        if i < mi && row[2 * dim + i].is_positive() {
            basis[i] = 2 * dim + i;
        } else {
            need_art.push(i);
        }
        row.push(rhs);
        rows.push(row);
    }
    let ncols = base + need_art.len();
    for row in rows.iter_mut() {
        let rhs = row.pop().unwrap();
        row.resize(ncols, Rat::zero());
        row.push(rhs);
    }
    for (k, &i) in need_art.iter().enumerate() {
        rows[i][base + k] = Rat::from_integer(1.into());
        basis[i] = base + k;
    }
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        ncols,
    };
    let mut allowed = vec![true; ncols];
    if !need_art.is_empty() {
        let mut cost = vec![Rat::zero(); ncols];
        for c in cost.iter_mut().skip(base) {
            *c = -Rat::from_integer(1.into());
        }
        t.set_objective(&cost);
        t.run(&allowed);
        if t.obj[ncols].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= base {
                match (0..base).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for a in allowed.iter_mut().skip(base) {
            *a = false;
        }
    }
    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..dim {
        cost[j] = objective[j].clone();
        cost[dim + j] = -&objective[j];
    }
    t.set_objective(&cost);
    let bounded = t.run(&allowed);
    let vals = t.values();
    let point: Vec<Rat> = (0..dim).map(|j| &vals[j] - &vals[dim + j]).collect();
    if bounded {
        LpOutcome::Optimal {
            value: t.obj[ncols].clone(),
            point,
        }
    } else {
        LpOutcome::Unbounded(point)
    }
}

pub fn feasible_point(dim: usize, eqs: &[Affine], ineqs: &[Affine]) -> Option<Vec<Rat>> {
    maximize(dim, eqs, ineqs, &vec![Rat::zero(); dim])
        .point()
        .map(|p| p.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn aff(a: &[i64], c: i64) -> Affine {
        Affine::new(a.iter().map(|&x| rat(x)).collect(), rat(c))
    }

    #[test]
    fn box_optimum() {
        // 0 <= x <= 2, 0 <= y <= 3, maximize x + y
        let ineqs = [aff(&[1, 0], 0), aff(&[-1, 0], 2), aff(&[0, 1], 0), aff(&[0, -1], 3)];
        match maximize(2, &[], &ineqs, &[rat(1), rat(1)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(5)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn negative_region_and_equalities() {
        // x <= -1, x + y = 0, maximize y
        let ineqs = [aff(&[-1, 0], -1)];
        let eqs = [aff(&[1, 1], 0)];
        assert!(matches!(
            maximize(2, &eqs, &ineqs, &[rat(0), rat(1)]),
            LpOutcome::Unbounded(_)
        ));
        match maximize(2, &eqs, &ineqs, &[rat(0), rat(-1)]) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(-1));
                assert_eq!(point, vec![rat(-1), rat(1)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_fractional() {
        let ineqs = [aff(&[1], -2), aff(&[-1], 1)];
        assert_eq!(maximize(1, &[], &ineqs, &[rat(1)]), LpOutcome::Infeasible);
        // 3x <= 1, maximize x
        let ineqs = [aff(&[-3], 1)];
        match maximize(1, &[], &ineqs, &[rat(1)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1, 3)),
            o => panic!("{o:?}"),
        }
        // redundant equality rows
        let eqs = [aff(&[1, 1], -1), aff(&[2, 2], -2)];
        assert!(feasible_point(2, &eqs, &[]).is_some());
    }
}
