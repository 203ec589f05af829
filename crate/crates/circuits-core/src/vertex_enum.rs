//! Exhaustive vertex enumeration for the normalized polyhedral model, and
//! the circuit enumerators built on top of it: the full set via the model
//! polytope, and the strictly feasible / sign-compatible subsets via its
//! faces.
//!
//! The enumerator Gauss-eliminates the free x-block (always possible when
//! the original polyhedron is pointed), then sweeps every candidate support
//! of the remaining nonnegative variables whose size matches the rank of
//! the reduced equality system. Each full-column-rank consistent candidate
//! yields one basic solution; feasible ones are deduplicated by exact
//! coordinates and re-verified to have active-constraint rank equal to the
//! full variable count. Brute force, but provably complete, and the
//! enumeration backend stays swappable behind this contract.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exactnum::{rat, RatMatrix, RatVector, Rational};
use crate::comb::Combinations;
use crate::polyhedron::{CircuitSet, Polyhedron};
use crate::polymodel::{build_polytope, ModelPoint, ModelSystem, ModelVar, PolyModel};
use crate::Error;

/// All vertices of a normalized model, sorted by coordinates.
pub fn enumerate_vertices(model: &PolyModel) -> Result<Vec<ModelPoint>, Error> {
    if !model.is_normalized() {
        return Err(Error::NotAPolytope);
    }
    let sys = model.system();
    let n_vars = sys.vars.len();
    let m = sys.constraints.rows();

    let mut work = sys.constraints.clone();
    let mut rhs = sys.rhs.clone();
    let mut row_used = vec![false; m];
    let mut free_pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivoted = vec![false; n_vars];
    let free_cols: Vec<usize> = (0..n_vars).filter(|&j| !sys.nonneg[j]).collect();
    loop {
        let mut progressed = false;
        for &j in &free_cols {
            if pivoted[j] {
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
            row_used[r] = true;
            pivoted[j] = true;
            free_pivots.push((j, r));
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    // Pointedness of P makes the free block full column rank, so every free
    // variable finds a pivot row.
    assert!(
        (0..n_vars).all(|j| sys.nonneg[j] || pivoted[j]),
        "free block must be eliminable in a pointed model"
    );

    let nn_cols: Vec<usize> = (0..n_vars).filter(|&j| sys.nonneg[j]).collect();
    let red_rows: Vec<usize> = (0..m).filter(|&r| !row_used[r]).collect();
    let reduced = {
        let mut mat = RatMatrix::zero(red_rows.len(), nn_cols.len());
        for (ri, &r) in red_rows.iter().enumerate() {
            for (ci, &c) in nn_cols.iter().enumerate() {
                *mat.at_mut(ri, ci) = work.at(r, c).clone();
            }
        }
        mat
    };
    let red_rhs: RatVector = red_rows.iter().map(|r| rhs[*r].clone()).collect();
    let support_size = reduced.rank();

    let verifier = VertexVerifier::new(model);
    let mut seen: BTreeSet<ModelPoint> = BTreeSet::new();
    for cols in Combinations::new(nn_cols.len(), support_size) {
        let sub = reduced.select_cols(&cols);
        // Candidates must determine the point uniquely and consistently.
        let Some(partial) = sub.solve_unique(&red_rhs) else {
            continue;
        };
        if partial.iter().any(Signed::is_negative) {
            continue;
        }
        let mut z = vec![Rational::zero(); n_vars];
        for (k, &ci) in cols.iter().enumerate() {
            z[nn_cols[ci]] = partial[k].clone();
        }
        for &(var, row) in free_pivots.iter().rev() {
            let mut value = rhs[row].clone();
            for &c in &nn_cols {
                if !z[c].is_zero() {
                    value -= work.at(row, c) * &z[c];
                }
            }
            z[var] = value;
        }
        let pt = model.point_from_solution(&sys, &z);
        debug_assert!(model.point_satisfies(&pt));
        if verifier.is_vertex(&pt) {
            seen.insert(pt);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Active-constraint rank test over the full variable space: all equality
/// rows plus one unit row per tight nonnegative variable must reach the
/// total variable count. Face fixings count as tight nonnegativities, so
/// verification runs against the model with its zero-sets cleared.
struct VertexVerifier {
    system: ModelSystem,
}

impl VertexVerifier {
    fn new(model: &PolyModel) -> Self {
        let mut bare = model.clone();
        bare.clear_restrictions();
        VertexVerifier {
            system: bare.system(),
        }
    }

    fn is_vertex(&self, pt: &ModelPoint) -> bool {
        let n_vars = self.system.vars.len();
        let mut tight_rows = Vec::new();
        for (col, var) in self.system.vars.iter().enumerate() {
            let value = match var {
                ModelVar::X(_) => continue,
                ModelVar::YPlus(i) => &pt.y_plus[*i],
                ModelVar::YMinus(i) => &pt.y_minus[*i],
            };
            if value.is_zero() {
                tight_rows.push(col);
            }
        }
        let mut active = RatMatrix::zero(tight_rows.len(), n_vars);
        for (r, &col) in tight_rows.iter().enumerate() {
            *active.at_mut(r, col) = rat(1);
        }
        self.system.constraints.vstack(&active).rank() == n_vars
    }
}

/// Full circuit enumeration through the model polytope.
pub fn model_circuits(poly: &Polyhedron) -> CircuitSet {
    let model = build_polytope(poly);
    let vertices = enumerate_vertices(&model).expect("model is normalized");
    let mut set = CircuitSet::symmetric();
    for pt in &vertices {
        if let Some(circuit) = model
            .extract_circuit(pt)
            .expect("enumerated vertices are consistent")
        {
            set.insert(circuit);
        }
    }
    set
}

/// The circuits strictly feasible at x0, enumerated from the restricted
/// model face. Unlike the full set this set is not symmetric.
pub fn feasible_circuits(poly: &Polyhedron, x0: &[Rational]) -> Result<CircuitSet, Error> {
    let model = build_polytope(poly).restrict_strictly_feasible(poly, x0)?;
    let vertices = enumerate_vertices(&model)?;
    let mut set = CircuitSet::signed();
    for pt in &vertices {
        if let Some(circuit) = model
            .extract_circuit(pt)
            .expect("enumerated vertices are consistent")
        {
            set.insert(circuit);
        }
    }
    Ok(set)
}

/// The circuits sign-compatible with u, enumerated from the restricted
/// model face. No T-type vertex can lie on this face, so every vertex
/// carries a circuit.
pub fn sign_compatible_circuits(poly: &Polyhedron, u: &[Rational]) -> Result<CircuitSet, Error> {
    let model = build_polytope(poly).restrict_sign_compatible(u)?;
    let vertices = enumerate_vertices(&model)?;
    let mut set = CircuitSet::signed();
    for pt in &vertices {
        let circuit = model
            .extract_circuit(pt)
            .expect("enumerated vertices are consistent")
            .expect("sign-compatible faces have no T-type vertices");
        set.insert(circuit);
    }
    Ok(set)
}
