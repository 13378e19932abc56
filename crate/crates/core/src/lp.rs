//! Exact linear feasibility over the rationals.
//!
//! A phase-1 simplex with Bland's rule decides systems `{x >= 0 : Ax = b}`
//! exactly and, on infeasibility, extracts a Farkas certificate `y` with
//! `y.b > 0` and `y.A <= 0` componentwise. The [`Feasibility`] builder layers
//! free variables and mixed (in)equality constraints on top by the usual
//! split-and-slack encoding, translating certificates back to the original
//! constraint rows.

use crate::rat::{dot, Matrix, Rat, Vector};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A feasible point.
    Feasible(Vector),
    /// Farkas certificate: `y` with `y.A <= 0` on every column and `y.b > 0`.
    Infeasible(Vector),
}

/// Decide `{x >= 0 : Ax = b}` (columns of `a` are variables).
pub fn feasible_eq_nonneg(a: &Matrix, b: &[Rat]) -> LpOutcome {
    let m = a.rows;
    let n = a.cols;
    assert_eq!(b.len(), m);

    // Tableau with artificial basis: columns [x | artificials | rhs].
    let cols = n + m + 1;
    let mut t = Matrix::zero(m + 1, cols);
    for i in 0..m {
        let flip = b[i] < Rat::zero();
        for j in 0..n {
            t[(i, j)] = if flip { -&a[(i, j)] } else { a[(i, j)].clone() };
        }
        t[(i, n + i)] = Rat::one();
        t[(i, cols - 1)] = if flip { -&b[i] } else { b[i].clone() };
    }
    // Objective row: minimize the sum of artificials. Reduced costs start at
    // c_j - sum_i a_ij for originals, 0 for artificials.
    for j in 0..cols {
        let mut s = Rat::zero();
        for i in 0..m {
            s += t[(i, j)].clone();
        }
        if j < n || j == cols - 1 {
            t[(m, j)] = -s;
        }
    }

    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| t[(m, j)] < Rat::zero()) else {
            break;
        };
        // Ratio test, Bland tie-break on basis variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[(i, enter)] > Rat::zero() {
                let ratio = &t[(i, cols - 1)] / &t[(i, enter)];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Phase-1 objective is bounded below by 0, so this cannot happen.
            unreachable!("phase-1 simplex unbounded");
        };
        pivot(&mut t, leave, enter);
        basis[leave] = enter;
    }

    let objective = -t[(m, cols - 1)].clone();
    if objective.is_zero() {
        // Drive any artificial variables out of the basis if possible; at a
        // zero objective they carry value zero either way.
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[(i, cols - 1)].clone();
            }
        }
        debug_assert!({
            let ax = a.mul_vec(&x);
            ax.iter().zip(b).all(|(l, r)| l == r)
        });
        LpOutcome::Feasible(x)
    } else {
        // Multipliers from the artificial columns: the reduced cost of
        // artificial i is 1 - y_i, so y_i = 1 - that entry; undo row flips.
        let mut y = Vector::with_capacity(m);
        for i in 0..m {
            let yi = Rat::one() - &t[(m, n + i)];
            y.push(if b[i] < Rat::zero() { -yi } else { yi });
        }
        debug_assert!(dot(&y, b) > Rat::zero());
        debug_assert!((0..n).all(|j| dot(&y, &a.col(j)) <= Rat::zero()));
        LpOutcome::Infeasible(y)
    }
}

fn pivot(t: &mut Matrix, row: usize, col: usize) {
    let inv = t[(row, col)].recip();
    for j in 0..t.cols {
        let v = &t[(row, j)] * &inv;
        t[(row, j)] = v;
    }
    for i in 0..t.rows {
        if i != row && !t[(i, col)].is_zero() {
            let f = t[(i, col)].clone();
            for j in 0..t.cols {
                let d = &f * &t[(row, j)];
                t[(i, j)] -= d;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Feasibility problem over free variables with mixed constraints.
#[derive(Debug, Clone, Default)]
pub struct Feasibility {
    nvars: usize,
    rows: Vec<(Vector, Cmp, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Values of the original free variables.
    Point(Vector),
    /// One multiplier per constraint row, certifying infeasibility: the
    /// nonnegative combination `sum_i y_i * row_i` (with `y_i <= 0` on `Le`
    /// rows, `y_i >= 0` on `Ge` rows, free on `Eq` rows) is contradictory.
    Certificate(Vector),
}

impl Feasibility {
    pub fn new(nvars: usize) -> Self {
        Feasibility {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn constraint(&mut self, coeffs: Vector, cmp: Cmp, rhs: Rat) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, cmp, rhs));
    }

    pub fn ge(&mut self, coeffs: Vector, rhs: Rat) {
        self.constraint(coeffs, Cmp::Ge, rhs);
    }

    pub fn le(&mut self, coeffs: Vector, rhs: Rat) {
        self.constraint(coeffs, Cmp::Le, rhs);
    }

    pub fn eq(&mut self, coeffs: Vector, rhs: Rat) {
        self.constraint(coeffs, Cmp::Eq, rhs);
    }

    /// Decide the system. Free variables are split as differences of
    /// nonnegative pairs; inequalities get slack columns.
    pub fn solve(&self) -> Witness {
        let m = self.rows.len();
        let nslack = self
            .rows
            .iter()
            .filter(|(_, c, _)| *c != Cmp::Eq)
            .count();
        let ncols = 2 * self.nvars + nslack;
        let mut a = Matrix::zero(m, ncols);
        let mut b = Vector::with_capacity(m);
        let mut slack = 2 * self.nvars;
        for (i, (coeffs, cmp, rhs)) in self.rows.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                a[(i, 2 * j)] = c.clone();
                a[(i, 2 * j + 1)] = -c.clone();
            }
            match cmp {
                Cmp::Ge => {
                    a[(i, slack)] = -Rat::one();
                    slack += 1;
                }
                Cmp::Le => {
                    a[(i, slack)] = Rat::one();
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            b.push(rhs.clone());
        }
        match feasible_eq_nonneg(&a, &b) {
            LpOutcome::Feasible(x) => {
                let point = (0..self.nvars)
                    .map(|j| &x[2 * j] - &x[2 * j + 1])
                    .collect();
                Witness::Point(point)
            }
            LpOutcome::Infeasible(y) => Witness::Certificate(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn ri(vals: &[i64]) -> Vector {
        vals.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn simple_feasible() {
        // x + y = 1, x, y >= 0
        let a = Matrix::from_rows(vec![ri(&[1, 1])]);
        match feasible_eq_nonneg(&a, &[rat_int(1)]) {
            LpOutcome::Feasible(x) => {
                assert_eq!(&x[0] + &x[1], rat_int(1));
                assert!(x.iter().all(|v| *v >= rat_int(0)));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = -1 with x,y >= 0 is infeasible.
        let a = Matrix::from_rows(vec![ri(&[1, 1])]);
        match feasible_eq_nonneg(&a, &[rat_int(-1)]) {
            LpOutcome::Infeasible(y) => {
                assert!(dot(&y, &[rat_int(-1)]) > rat_int(0));
                assert!(dot(&y, &a.col(0)) <= rat_int(0));
                assert!(dot(&y, &a.col(1)) <= rat_int(0));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn builder_mixed_constraints() {
        // Free x with x >= 1/2, x <= 3/4.
        let mut f = Feasibility::new(1);
        f.ge(ri(&[1]), rat(1, 2));
        f.le(ri(&[1]), rat(3, 4));
        match f.solve() {
            Witness::Point(p) => {
                assert!(p[0] >= rat(1, 2) && p[0] <= rat(3, 4));
            }
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn builder_infeasible() {
        let mut f = Feasibility::new(1);
        f.ge(ri(&[1]), rat_int(1));
        f.le(ri(&[1]), rat_int(0));
        match f.solve() {
            Witness::Certificate(y) => assert_eq!(y.len(), 2),
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_guard() {
        // A classically degenerate system; Bland's rule must terminate.
        let mut f = Feasibility::new(3);
        f.eq(ri(&[1, 1, 1]), rat_int(0));
        f.ge(ri(&[1, 0, 0]), rat_int(0));
        f.ge(ri(&[0, 1, 0]), rat_int(0));
        f.ge(ri(&[0, 0, 1]), rat_int(0));
        match f.solve() {
            Witness::Point(p) => assert_eq!(p, ri(&[0, 0, 0])),
            other => panic!("expected origin, got {other:?}"),
        }
    }

    #[test]
    fn convex_membership_use() {
        // Is (1/2, 1/2) in conv{(0,0), (1,0), (0,1), (1,1)}?
        let corners = [ri(&[0, 0]), ri(&[1, 0]), ri(&[0, 1]), ri(&[1, 1])];
        let mut a = Matrix::zero(3, 4);
        for (j, c) in corners.iter().enumerate() {
            a[(0, j)] = c[0].clone();
            a[(1, j)] = c[1].clone();
            a[(2, j)] = Rat::one();
        }
        let b = vec![rat(1, 2), rat(1, 2), rat_int(1)];
        assert!(matches!(feasible_eq_nonneg(&a, &b), LpOutcome::Feasible(_)));

        let outside = vec![rat_int(2), rat_int(0), rat_int(1)];
        assert!(matches!(
            feasible_eq_nonneg(&a, &outside),
            LpOutcome::Infeasible(_)
        ));
    }
}
