//! Exact two-phase primal simplex over systems of equality rows with a mix
//! of nonnegative and free variables, returning basic (vertex) optima.
//!
//! Free variables are Gauss-pivoted into the basis up front and never leave:
//! each one is bound to a pivot row used only for back-substitution, so the
//! simplex itself runs on a reduced all-nonnegative system. A free variable
//! whose column vanishes from the remaining rows lies in a lineality
//! direction; if its reduced cost is nonzero the program is unbounded along
//! it, otherwise it is fixed at zero. Bland's rule (lowest eligible index
//! entering, lowest basic index breaking ratio ties) makes every solve
//! deterministic and immune to cycling under the heavy degeneracy the
//! normalized circuit models produce.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exactnum::{dot, RatMatrix, RatVector, Rational};

/// Minimization over {z : constraints z = rhs, z_i >= 0 for flagged i}.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub constraints: RatMatrix,
    pub rhs: RatVector,
    pub nonneg: Vec<bool>,
    pub objective: RatVector,
}

/// An exact optimum together with its vertex certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSolution {
    pub point: RatVector,
    pub value: Rational,
    /// Indices of basic variables (free pivots plus simplex basis).
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(VertexSolution),
    Infeasible,
    /// A feasible direction along which the objective decreases forever.
    Unbounded { ray: RatVector },
}

/// Solves the program exactly, returning a basic optimal solution when one
/// exists. All outcomes are normal values; nothing here panics on
/// degenerate or infeasible input.
pub fn solve_vertex(lp: &LinearProgram) -> LpOutcome {
    let n_vars = lp.constraints.cols();
    let m = lp.constraints.rows();
    assert_eq!(lp.rhs.len(), m, "rhs length mismatch");
    assert_eq!(lp.nonneg.len(), n_vars, "nonneg mask length mismatch");
    assert_eq!(lp.objective.len(), n_vars, "objective length mismatch");

    let mut work = lp.constraints.clone();
    let mut rhs = lp.rhs.clone();
    let mut reduced_cost = lp.objective.clone();

    // Pivot free variables into dedicated rows and eliminate their columns
    // everywhere else (other rows and the objective). Eliminations can
    // re-introduce a previously skipped free column into an unused row, so
    // scan to a fixpoint.
    let mut row_used = vec![false; m];
    let mut free_pivots: Vec<(usize, usize)> = Vec::new(); // (var, row)
    let mut pivoted = vec![false; n_vars];
    loop {
        let mut progressed = false;
        for j in 0..n_vars {
            if lp.nonneg[j] || pivoted[j] {
                continue;
            }
            let Some(r) = (0..m).find(|&r| !row_used[r] && !work.at(r, j).is_zero()) else {
                continue;
            };
            let p = work.at(r, j).clone();
            for c in 0..n_vars {
                *work.at_mut(r, c) /= &p;
            }
            rhs[r] /= &p;
            for other in 0..m {
                if other == r || work.at(other, j).is_zero() {
                    continue;
                }
                let f = work.at(other, j).clone();
                for c in 0..n_vars {
                    let delta = &f * work.at(r, c);
                    *work.at_mut(other, c) -= delta;
                }
                let delta = &f * &rhs[r];
                rhs[other] -= delta;
            }
            if !reduced_cost[j].is_zero() {
                let f = reduced_cost[j].clone();
                for (c, rc) in reduced_cost.iter_mut().enumerate() {
                    let delta = &f * work.at(r, c);
                    *rc -= delta;
                }
            }
            row_used[r] = true;
            pivoted[j] = true;
            free_pivots.push((j, r));
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let dangling: Vec<usize> = (0..n_vars)
        .filter(|&j| !lp.nonneg[j] && !pivoted[j])
        .collect();

    // Reduced system: the unused rows over the nonnegative columns. Free
    // columns are zero there by construction.
    let red_cols: Vec<usize> = (0..n_vars).filter(|&j| lp.nonneg[j]).collect();
    let red_rows: Vec<usize> = (0..m).filter(|&r| !row_used[r]).collect();
    debug_assert!(red_rows.iter().all(|&r| {
        (0..n_vars).all(|j| lp.nonneg[j] || work.at(r, j).is_zero())
    }));
    let mut tableau: Vec<RatVector> = red_rows
        .iter()
        .map(|&r| {
            let mut row: RatVector = red_cols.iter().map(|&c| work.at(r, c).clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();

    let Some(mut basis) = phase_one(&mut tableau, red_cols.len()) else {
        return LpOutcome::Infeasible;
    };

    // Any dangling free variable with nonzero reduced cost witnesses
    // unboundedness: sliding it moves only free pivot variables.
    for &j in &dangling {
        if reduced_cost[j].is_zero() {
            continue;
        }
        let step = if reduced_cost[j].is_positive() {
            Rational::from_integer((-1).into())
        } else {
            Rational::from_integer(1.into())
        };
        let mut ray = vec![Rational::zero(); n_vars];
        ray[j] = step.clone();
        for &(var, row) in &free_pivots {
            ray[var] = -(work.at(row, j) * &step);
        }
        return LpOutcome::Unbounded { ray };
    }

    // Phase 2 with the reduced objective.
    let red_obj: RatVector = red_cols.iter().map(|&c| reduced_cost[c].clone()).collect();
    let n_red = red_cols.len();
    let rhs_col = tableau.first().map_or(n_red, |row| row.len() - 1);
    let mut cost = vec![Rational::zero(); rhs_col + 1];
    for (j, obj) in red_obj.iter().enumerate() {
        cost[j] = obj.clone();
    }
    for (i, &b) in basis.iter().enumerate() {
        if red_obj[b].is_zero() {
            continue;
        }
        let f = red_obj[b].clone();
        for (c, cost_entry) in cost.iter_mut().enumerate() {
            let delta = &f * &tableau[i][c];
            *cost_entry -= delta;
        }
    }
    match simplex(&mut tableau, &mut basis, &mut cost, n_red) {
        SimplexEnd::Optimal => {}
        SimplexEnd::Unbounded { entering } => {
            let mut red_ray = vec![Rational::zero(); n_red];
            red_ray[entering] = Rational::from_integer(1.into());
            for (i, &b) in basis.iter().enumerate() {
                red_ray[b] = -tableau[i][entering].clone();
            }
            let mut ray = vec![Rational::zero(); n_vars];
            for (k, &c) in red_cols.iter().enumerate() {
                ray[c] = red_ray[k].clone();
            }
            for &(var, row) in &free_pivots {
                let mut adjust = Rational::zero();
                for (k, &c) in red_cols.iter().enumerate() {
                    adjust += work.at(row, c) * &red_ray[k];
                }
                ray[var] = -adjust;
            }
            return LpOutcome::Unbounded { ray };
        }
    }

    // Assemble the full point: simplex basis values, dangling frees at
    // zero, pivoted frees by back-substitution through their rows.
    let mut point = vec![Rational::zero(); n_vars];
    for (i, &b) in basis.iter().enumerate() {
        point[red_cols[b]] = tableau[i][rhs_col].clone();
    }
    for &(var, row) in free_pivots.iter().rev() {
        let mut value = rhs[row].clone();
        for &c in &red_cols {
            if !point[c].is_zero() {
                value -= work.at(row, c) * &point[c];
            }
        }
        point[var] = value;
    }
    let value = dot(&lp.objective, &point);
    let mut full_basis: Vec<usize> = free_pivots.iter().map(|&(var, _)| var).collect();
    full_basis.extend(basis.iter().map(|&b| red_cols[b]));
    full_basis.sort_unstable();
    LpOutcome::Optimal(VertexSolution {
        point,
        value,
        basis: full_basis,
    })
}

enum SimplexEnd {
    Optimal,
    Unbounded { entering: usize },
}

/// Bland-rule primal simplex on a feasible tableau. `eligible` bounds the
/// entering-column range, which phase 2 uses to shut out artificials.
fn simplex(
    tableau: &mut [RatVector],
    basis: &mut [usize],
    cost: &mut RatVector,
    eligible: usize,
) -> SimplexEnd {
    let rhs_col = cost.len() - 1;
    loop {
        let Some(entering) = (0..eligible).find(|&j| cost[j].is_negative()) else {
            return SimplexEnd::Optimal;
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[rhs_col] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((li, best)) => {
                    ratio < *best || (ratio == *best && basis[i] < basis[*li])
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return SimplexEnd::Unbounded { entering };
        };
        pivot(tableau, basis, cost, pivot_row, entering);
    }
}

fn pivot(
    tableau: &mut [RatVector],
    basis: &mut [usize],
    cost: &mut RatVector,
    pivot_row: usize,
    entering: usize,
) {
    let p = tableau[pivot_row][entering].clone();
    for entry in tableau[pivot_row].iter_mut() {
        *entry /= &p;
    }
    for i in 0..tableau.len() {
        if i == pivot_row || tableau[i][entering].is_zero() {
            continue;
        }
        let f = tableau[i][entering].clone();
        for c in 0..tableau[i].len() {
            let delta = &f * &tableau[pivot_row][c];
            tableau[i][c] -= delta;
        }
    }
    if !cost[entering].is_zero() {
        let f = cost[entering].clone();
        for (c, cost_entry) in cost.iter_mut().enumerate() {
            let delta = &f * &tableau[pivot_row][c];
            *cost_entry -= delta;
        }
    }
    basis[pivot_row] = entering;
}

/// Phase 1: appends one artificial column per row, minimizes their sum, and
/// leaves the tableau feasible over the real columns with artificials
/// driven out (redundant rows are dropped). None means infeasible.
fn phase_one(tableau: &mut Vec<RatVector>, n_red: usize) -> Option<Vec<usize>> {
    let m = tableau.len();
    if m == 0 {
        return Some(Vec::new());
    }
    for (i, row) in tableau.iter_mut().enumerate() {
        let rhs = row.pop().expect("row has rhs");
        let negate = rhs.is_negative();
        if negate {
            for entry in row.iter_mut() {
                *entry = -entry.clone();
            }
        }
        for k in 0..m {
            row.push(if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            });
        }
        row.push(if negate { -rhs } else { rhs });
    }
    let rhs_col = n_red + m;
    let mut basis: Vec<usize> = (n_red..n_red + m).collect();
    let mut cost = vec![Rational::zero(); rhs_col + 1];
    for j in 0..n_red {
        let mut s = Rational::zero();
        for row in tableau.iter() {
            s += &row[j];
        }
        cost[j] = -s;
    }
    let mut total = Rational::zero();
    for row in tableau.iter() {
        total += &row[rhs_col];
    }
    cost[rhs_col] = -total;

    match simplex(tableau, &mut basis, &mut cost, n_red) {
        SimplexEnd::Optimal => {}
        SimplexEnd::Unbounded { .. } => unreachable!("phase 1 objective is bounded below by 0"),
    }
    if !cost[rhs_col].is_zero() {
        return None; // positive artificial mass remains: infeasible
    }

    // Drive leftover artificials out of the basis; rows that cannot pivot
    // on any real column are redundant and dropped.
    let mut drop_rows = Vec::new();
    for i in 0..tableau.len() {
        if basis[i] < n_red {
            continue;
        }
        match (0..n_red).find(|&j| !tableau[i][j].is_zero()) {
            Some(j) => pivot(tableau, &mut basis, &mut cost, i, j),
            None => drop_rows.push(i),
        }
    }
    for &i in drop_rows.iter().rev() {
        tableau.remove(i);
        basis.remove(i);
    }
    // Truncate artificial columns, keeping the rhs.
    for row in tableau.iter_mut() {
        let rhs = row[rhs_col].clone();
        row.truncate(n_red);
        row.push(rhs);
    }
    Some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::Combinations;
    use crate::exactnum::{is_zero_vec, rat, RatMatrix};
    use crate::rng::SplitMix64;

    fn rv(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn optimal(lp: &LinearProgram) -> VertexSolution {
        match solve_vertex(lp) {
            LpOutcome::Optimal(sol) => sol,
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn bounded_single_variable() {
        // min -z subject to z + s = 1, z, s >= 0.
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[1, 1]], 2),
            rhs: rv(&[1]),
            nonneg: vec![true, true],
            objective: rv(&[-1, 0]),
        };
        let sol = optimal(&lp);
        assert_eq!(sol.point, rv(&[1, 0]));
        assert_eq!(sol.value, rat(-1));
    }

    #[test]
    fn infeasible_sign_clash() {
        // z >= 0 with z = -1.
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[1]], 1),
            rhs: rv(&[-1]),
            nonneg: vec![true],
            objective: rv(&[0]),
        };
        assert_eq!(solve_vertex(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_free_variable() {
        // min -z, z free, nothing binds it.
        let lp = LinearProgram {
            constraints: RatMatrix::zero(0, 1),
            rhs: vec![],
            nonneg: vec![false],
            objective: rv(&[-1]),
        };
        match solve_vertex(&lp) {
            LpOutcome::Unbounded { ray } => {
                assert!(dot(&lp.objective, &ray).is_negative());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_nonneg_direction() {
        // min -x1 subject to x1 - x2 = 0, x >= 0: ray (1, 1).
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[1, -1]], 2),
            rhs: rv(&[0]),
            nonneg: vec![true, true],
            objective: rv(&[-1, 0]),
        };
        match solve_vertex(&lp) {
            LpOutcome::Unbounded { ray } => {
                assert!(is_zero_vec(&lp.constraints.mul_vec(&ray)));
                assert!(dot(&lp.objective, &ray).is_negative());
                assert!(ray.iter().all(|v| !v.is_negative()));
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn free_variable_pivoting_and_offset() {
        // min x + y with x free, y >= 0, x + y = 5: value 5 at (5, 0).
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[1, 1]], 2),
            rhs: rv(&[5]),
            nonneg: vec![false, true],
            objective: rv(&[1, 1]),
        };
        let sol = optimal(&lp);
        assert_eq!(sol.point, rv(&[5, 0]));
        assert_eq!(sol.value, rat(5));
    }

    #[test]
    fn free_variable_split_pair_reaches_vertex() {
        // min x with x free balanced by y1 - y2, y1 + y2 = 1: x = -1.
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[1, -1, 1], &[0, 1, 1]], 3),
            rhs: rv(&[0, 1]),
            nonneg: vec![false, true, true],
            objective: rv(&[1, 0, 0]),
        };
        let sol = optimal(&lp);
        assert_eq!(sol.point, rv(&[-1, 0, 1]));
        assert_eq!(sol.value, rat(-1));
    }

    #[test]
    fn dangling_free_variable_with_zero_cost_is_fixed() {
        // y >= 0 with y = 2; x free and absent from all rows, zero cost.
        let lp = LinearProgram {
            constraints: RatMatrix::from_i64_rows(&[&[0, 1]], 2),
            rhs: rv(&[2]),
            nonneg: vec![false, true],
            objective: rv(&[0, 1]),
        };
        let sol = optimal(&lp);
        assert_eq!(sol.point, rv(&[0, 2]));
        assert_eq!(sol.value, rat(2));
    }

    /// Optimal points satisfy all constraints exactly and the active rows
    /// (equalities plus tight nonnegativity bounds) reach full rank.
    fn assert_vertex(lp: &LinearProgram, sol: &VertexSolution) {
        let n = lp.constraints.cols();
        assert_eq!(lp.constraints.mul_vec(&sol.point), lp.rhs);
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            if nn {
                assert!(!sol.point[j].is_negative());
            }
        }
        let mut active = lp.constraints.clone();
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            if nn && sol.point[j].is_zero() {
                let mut row = RatMatrix::zero(1, n);
                *row.at_mut(0, j) = rat(1);
                active = active.vstack(&row);
            }
        }
        assert_eq!(active.rank(), n, "optimum is not a vertex");
    }

    #[test]
    fn random_bounded_lps_match_basic_solution_sweep() {
        let mut rng = SplitMix64::new(99);
        let mut solved = 0;
        for _ in 0..40 {
            // Random all-nonneg program made feasible by construction and
            // bounded by a budget row sum(x) + s = cap.
            let n = 3 + rng.index(2);
            let m = 1 + rng.index(2);
            let mut rows: Vec<RatVector> = (0..m)
                .map(|_| (0..n).map(|_| rat(rng.int_in(-3, 3))).collect())
                .collect();
            let feas: RatVector = (0..n).map(|_| rat(rng.int_in(0, 3))).collect();
            let mut rhs: RatVector = rows
                .iter()
                .map(|row| dot(&row[..], &feas))
                .collect();
            let cap = rat(20);
            let mut budget: RatVector = vec![rat(1); n];
            budget.push(rat(1)); // slack column
            for row in rows.iter_mut() {
                row.push(rat(0));
            }
            rows.push(budget);
            rhs.push(cap);
            let total = n + 1;
            let lp = LinearProgram {
                constraints: RatMatrix::from_rows(rows, total),
                rhs,
                nonneg: vec![true; total],
                objective: (0..total).map(|_| rat(rng.int_in(-4, 4))).collect(),
            };
            let LpOutcome::Optimal(sol) = solve_vertex(&lp) else {
                panic!("constructed program must be feasible and bounded");
            };
            assert_vertex(&lp, &sol);

            // Desk oracle: sweep every potential basis.
            let rank = lp.constraints.rank();
            let mut best: Option<Rational> = None;
            for cols in Combinations::new(total, rank) {
                let sub = lp.constraints.select_cols(&cols);
                if sub.rank() < rank {
                    continue;
                }
                let Some(partial) = sub.solve(&lp.rhs) else {
                    continue;
                };
                if partial.iter().any(|v| v.is_negative()) {
                    continue;
                }
                let mut full = vec![rat(0); total];
                for (k, &c) in cols.iter().enumerate() {
                    full[c] = partial[k].clone();
                }
                if lp.constraints.mul_vec(&full) != lp.rhs {
                    continue;
                }
                let value = dot(&lp.objective, &full);
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
            assert_eq!(sol.value, best.expect("oracle found no basic solution"));
            solved += 1;
        }
        assert!(solved >= 30);
    }
}
