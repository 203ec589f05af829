//! Sign-compatible sums and circuit walks.
//!
//! Given u in ker(A) \ {0}, the sum constructor repeatedly subtracts a
//! sign-compatible circuit with strictly smaller image support from the
//! residual until the residual is itself a circuit direction; the step
//! coefficient is the largest one preserving sign compatibility, so the
//! image support shrinks and the zero-set rank grows every round. At most
//! n - rank(A) terms result and the terms sum to u exactly. Circuits are
//! picked either by the steepest LP over the sign-compatible face of the
//! model polytope (c-steepest walks) or by the rank-augmentation search on
//! the residual, which needs nothing beyond Gaussian elimination; the two
//! pickers cross-check each other.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::augment::model_lp;
use crate::exactnum::{add_scaled, dot, is_zero_vec, sub_vec, support, RatVector, Rational};
use crate::lpsolve::{solve_vertex, LpOutcome};
use crate::polyhedron::{image_sign_compatible, Circuit, Polyhedron};
use crate::polymodel::build_polytope;
use crate::Error;

/// How the sum constructor chooses each circuit.
#[derive(Debug, Clone, Copy)]
pub enum CircuitPicker<'a> {
    /// Vertex optimum of min c.x over the sign-compatible face: yields
    /// c-steepest walks.
    SteepestLp(&'a [Rational]),
    /// The rank-augmentation search on the residual; independent of the
    /// polyhedral model and used to cross-check it.
    NaiveGaussian,
}

/// One walk step: a circuit and the positive coefficient applied to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub circuit: Circuit,
    pub length: Rational,
}

/// A circuit walk y_0, .., y_t with y_{i+1} = y_i + length_i * g_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitWalk {
    pub points: Vec<RatVector>,
    pub steps: Vec<WalkStep>,
}

impl CircuitWalk {
    /// Materializes walk points from a start point and a sign-compatible sum.
    pub fn from_sum(start: &[Rational], terms: Vec<(Rational, Circuit)>) -> CircuitWalk {
        let mut points = Vec::with_capacity(terms.len() + 1);
        points.push(start.to_vec());
        let mut current = start.to_vec();
        let mut steps = Vec::with_capacity(terms.len());
        for (length, circuit) in terms {
            current = add_scaled(&current, &length, &circuit.direction_rat());
            points.push(current.clone());
            steps.push(WalkStep { circuit, length });
        }
        CircuitWalk { points, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &RatVector {
        &self.points[0]
    }

    pub fn end(&self) -> &RatVector {
        self.points.last().expect("walk has at least one point")
    }

    /// y_t - y_0.
    pub fn displacement(&self) -> RatVector {
        sub_vec(self.end(), self.start())
    }
}

/// Exact per-walk validation report. Every field is decided exactly from
/// the walk; nothing is estimated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkReport {
    /// Every point lies in P and the step arithmetic replays exactly.
    pub feasible: bool,
    /// Every step image is sign-compatible with B(y_t - y_0), support
    /// containment included.
    pub sign_compatible: bool,
    /// Every walk point is integral.
    pub integral: bool,
    /// Steepness values non-decreasing along the walk (when c is given).
    pub steepness_monotone: Option<bool>,
    /// The x-support condition supp(g_i) within supp(y_t - y_i): reported,
    /// never enforced, because the LP face only constrains the B-image.
    pub x_support_contained: bool,
    /// Feasibility of the walk replayed in a caller-supplied step order.
    pub permutation_feasible: Option<bool>,
}

impl WalkReport {
    /// The checks that every constructed walk must pass (the reported-only
    /// x-support flag and optional extras excluded).
    pub fn core_passed(&self) -> bool {
        self.feasible && self.sign_compatible && self.steepness_monotone.unwrap_or(true)
    }
}

/// Decomposes u into at most n - rank(A) sign-compatible circuit steps
/// whose sum is exactly u.
pub fn sign_compatible_sum(
    poly: &Polyhedron,
    u: &[Rational],
    picker: CircuitPicker<'_>,
) -> Result<Vec<(Rational, Circuit)>, Error> {
    let n = poly.dim();
    if u.len() != n || is_zero_vec(u) {
        return Err(Error::ZeroVector);
    }
    if !is_zero_vec(&poly.eq_mat().mul_vec(u)) {
        return Err(Error::NotInKernel);
    }
    let stacked = poly.stacked();
    let term_bound = n - poly.eq_mat().rank();

    let mut w = u.to_vec();
    let mut terms: Vec<(Rational, Circuit)> = Vec::new();
    loop {
        assert!(terms.len() < term_bound, "sum exceeded its term bound");
        let image_w = stacked.mul_vec(&w);
        let zero_rows: Vec<usize> =
            (0..stacked.rows()).filter(|&j| image_w[j].is_zero()).collect();
        if stacked.select_rows(&zero_rows).rank() == n - 1 {
            // The residual is itself a circuit direction; emit it and stop.
            let circuit = poly.circuit_from_direction(&w)?;
            let i = circuit
                .direction()
                .iter()
                .position(|x| !x.is_zero())
                .expect("circuit directions are nonzero");
            let lambda = &w[i] / &circuit.direction_rat()[i];
            debug_assert!(lambda.is_positive());
            terms.push((lambda, circuit));
            break;
        }

        let circuit = match picker {
            CircuitPicker::SteepestLp(c) => {
                let model = build_polytope(poly).restrict_sign_compatible(&w)?;
                let (sys, lp) = model_lp(&model, c);
                let LpOutcome::Optimal(sol) = solve_vertex(&lp) else {
                    unreachable!("the sign-compatible face is a nonempty polytope");
                };
                let pt = model.point_from_solution(&sys, &sol.point);
                model
                    .extract_circuit(&pt)?
                    .expect("sign-compatible faces have no T-type vertices")
            }
            CircuitPicker::NaiveGaussian => find_sign_compatible_circuit_gaussian(poly, &w)?,
        };
        let image_g = circuit.image();
        let image_w = poly.ineq_mat().mul_vec(&w);
        debug_assert!(image_sign_compatible(image_g, &image_w));
        debug_assert!(support(image_g) != support(&image_w));

        // Longest coefficient keeping the residual in the same orthant.
        let lambda = positive_ratio_min(&image_w, image_g)
            .expect("a sign-compatible circuit shares a signed image index");
        w = add_scaled(&w, &(-lambda.clone()), &circuit.direction_rat());
        debug_assert!(!is_zero_vec(&w));
        terms.push((lambda, circuit));
    }

    // The terms reassemble u with zero residual.
    debug_assert!({
        let mut total = alloc::vec![Rational::zero(); n];
        for (lambda, g) in &terms {
            total = add_scaled(&total, lambda, &g.direction_rat());
        }
        total == u
    });
    Ok(terms)
}

fn positive_ratio_min(image_w: &[Rational], image_g: &[Rational]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (w_i, g_i) in image_w.iter().zip(image_g) {
        if (w_i.is_positive() && g_i.is_positive()) || (w_i.is_negative() && g_i.is_negative()) {
            let ratio = w_i / g_i;
            if best.as_ref().is_none_or(|b| ratio < *b) {
                best = Some(ratio);
            }
        }
    }
    best
}

/// Finds a circuit sign-compatible with w whose image support is strictly
/// smaller, using only rank computations and kernel extraction: repeatedly
/// pick the first row pair (j, k) outside the zero set that raises the
/// zero-set rank by two, take y in ker(D_{Z+k}) with (Dy)_j != 0 oriented
/// to match w on row j, and subtract the largest sign-preserving multiple.
pub fn find_sign_compatible_circuit_gaussian(
    poly: &Polyhedron,
    w: &[Rational],
) -> Result<Circuit, Error> {
    let n = poly.dim();
    if w.len() != n || is_zero_vec(w) {
        return Err(Error::ZeroVector);
    }
    if !is_zero_vec(&poly.eq_mat().mul_vec(w)) {
        return Err(Error::NotInKernel);
    }
    let stacked = poly.stacked();
    let rows = stacked.rows();

    let zero_set = |z: &[Rational]| -> Vec<usize> {
        let image = stacked.mul_vec(z);
        (0..rows).filter(|&j| image[j].is_zero()).collect()
    };
    let mut z = w.to_vec();
    let mut zero = zero_set(&z);
    let mut rank = stacked.select_rows(&zero).rank();
    if rank == n - 1 {
        return Err(Error::IsAlreadyCircuit);
    }

    while rank < n - 1 {
        let image_z = stacked.mul_vec(&z);
        let outside: Vec<usize> = (0..rows).filter(|&j| !image_z[j].is_zero()).collect();
        let mut found = None;
        'pairs: for (a, &j) in outside.iter().enumerate() {
            for &k in &outside[a + 1..] {
                let mut extended = zero.clone();
                extended.push(j);
                extended.push(k);
                if stacked.select_rows(&extended).rank() == rank + 2 {
                    found = Some((j, k));
                    break 'pairs;
                }
            }
        }
        let (j, k) = found.expect("a pointed system extends any rank <= n-2 zero set by two");

        let mut with_k = zero.clone();
        with_k.push(k);
        let kernel = stacked.select_rows(&with_k).kernel_basis();
        let row_j = stacked.row(j);
        let mut y = kernel
            .into_iter()
            .find(|v| !dot(row_j, v).is_zero())
            .expect("the kernel leaves row j unsaturated");
        if (dot(row_j, &y) * &image_z[j]).is_negative() {
            y = y.iter().map(|v| -v).collect();
        }

        let image_y = stacked.mul_vec(&y);
        let alpha = positive_ratio_min(&image_z, &image_y)
            .expect("row j contributes a positive ratio");
        z = add_scaled(&z, &(-alpha), &y);
        debug_assert!(!is_zero_vec(&z));
        let new_zero = zero_set(&z);
        let new_rank = stacked.select_rows(&new_zero).rank();
        debug_assert!(new_rank > rank);
        zero = new_zero;
        rank = new_rank;
    }

    let circuit = poly.circuit_from_direction(&z)?;
    debug_assert!(image_sign_compatible(
        circuit.image(),
        &poly.ineq_mat().mul_vec(w)
    ));
    Ok(circuit)
}

/// Constructs the c-steepest sign-compatible circuit walk from v1 to v2:
/// every step is a vertex optimum of min c.x over the sign-compatible face
/// of the residual, so step steepness is non-decreasing along the walk.
pub fn c_steepest_walk(
    poly: &Polyhedron,
    v1: &[Rational],
    v2: &[Rational],
    c: &[Rational],
) -> Result<CircuitWalk, Error> {
    if !poly.contains(v1) || !poly.contains(v2) {
        return Err(Error::PointNotInPolyhedron);
    }
    if v1 == v2 {
        return Err(Error::IdenticalEndpoints);
    }
    let u = sub_vec(v2, v1);
    let terms = sign_compatible_sum(poly, &u, CircuitPicker::SteepestLp(c))?;
    let walk = CircuitWalk::from_sum(v1, terms);
    debug_assert_eq!(walk.end(), v2);
    Ok(walk)
}

/// Exact walk validation; see [`WalkReport`] for the meaning of each field.
pub fn validate_walk(
    poly: &Polyhedron,
    walk: &CircuitWalk,
    c: Option<&[Rational]>,
    permutation: Option<&[usize]>,
) -> WalkReport {
    let displacement = walk.displacement();
    let image_u = poly.ineq_mat().mul_vec(&displacement);

    let mut feasible = walk.points.iter().all(|p| poly.contains(p));
    let mut replay = walk.start().clone();
    for (step, target) in walk.steps.iter().zip(&walk.points[1..]) {
        if !step.length.is_positive() {
            feasible = false;
        }
        replay = add_scaled(&replay, &step.length, &step.circuit.direction_rat());
        if &replay != target {
            feasible = false;
        }
    }

    let sign_compatible = walk
        .steps
        .iter()
        .all(|s| image_sign_compatible(s.circuit.image(), &image_u));

    let integral = walk
        .points
        .iter()
        .all(|p| p.iter().all(Rational::is_integer));

    let steepness_monotone = c.map(|c| {
        walk.steps
            .windows(2)
            .all(|pair| pair[0].circuit.steepness(c) <= pair[1].circuit.steepness(c))
    });

    let end = walk.end();
    let x_support_contained = walk.steps.iter().zip(&walk.points).all(|(step, point)| {
        let residual = sub_vec(end, point);
        let target_support = support(&residual);
        support(&step.circuit.direction_rat()).is_subset(&target_support)
    });

    let permutation_feasible = permutation.map(|order| {
        assert_eq!(order.len(), walk.steps.len(), "permutation length mismatch");
        let mut position = walk.start().clone();
        let mut ok = poly.contains(&position);
        for &idx in order {
            let step = &walk.steps[idx];
            position = add_scaled(&position, &step.length, &step.circuit.direction_rat());
            ok = ok && poly.contains(&position);
        }
        ok && &position == walk.end()
    });

    WalkReport {
        feasible,
        sign_compatible,
        integral,
        steepness_monotone,
        x_support_contained,
        permutation_feasible,
    }
}

/// Steepness of every step against the full sign-compatible circuit set of
/// the residual: step i must minimize c.g / ||Bg||_1 among the circuits
/// sign-compatible with the remaining difference.
pub fn walk_is_c_steepest(poly: &Polyhedron, walk: &CircuitWalk, c: &[Rational]) -> bool {
    let end = walk.end();
    for (step, point) in walk.steps.iter().zip(&walk.points) {
        let residual = sub_vec(end, point);
        let Ok(candidates) = crate::vertex_enum::sign_compatible_circuits(poly, &residual) else {
            return false;
        };
        let mine = step.circuit.steepness(c);
        for h in candidates.iter() {
            if h.steepness(c) < mine {
                return false;
            }
        }
    }
    true
}
