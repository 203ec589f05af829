//! Steepest-descent circuit augmentation: the LP oracle over the strictly
//! feasible face of the model polytope, maximal step lengths, the full
//! augmentation solver, and trace verification.
//!
//! A steepest-descent circuit at x0 minimizes c.g / ||Bg||_1 over the
//! circuits strictly feasible at x0. On the normalized face every S-type
//! vertex has ||Bg||_1 = 1, so the LP objective value at a vertex optimum
//! *is* the steepness; the extracted circuit is re-normalized to coprime
//! integers and its steepness recomputed from the integer data as a
//! consistency assertion.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_traits::{Signed, Zero};

use crate::exactnum::{add_scaled, dot, rat, RatMatrix, RatVector, Rational};
use crate::lpsolve::{solve_vertex, LinearProgram, LpOutcome};
use crate::polyhedron::{Circuit, Polyhedron};
use crate::polymodel::{build_polytope, ModelSystem, ModelVar, PolyModel};
use crate::Error;

/// Result of the steepest-descent oracle at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SteepestOutcome {
    /// The feasible-direction face is empty (P is a single point).
    NoFeasibleDirection,
    /// Every strictly feasible circuit has nonnegative steepness.
    NoDescent,
    Descent {
        circuit: Circuit,
        /// c.g / ||Bg||_1, negative.
        steepness: Rational,
    },
}

/// Largest feasible step along a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxStep {
    Bounded(Rational),
    Unbounded,
}

/// One augmentation record: the point left, the circuit taken, the maximal
/// step length, and the steepness of the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentStep {
    pub point: RatVector,
    pub circuit: Circuit,
    pub step: Rational,
    pub steepness: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    Optimal { point: RatVector, value: Rational },
    Unbounded { certificate: Circuit },
}

/// A complete steepest-descent run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationTrace {
    pub start: RatVector,
    pub steps: Vec<AugmentStep>,
    pub terminal: Terminal,
}

/// Builds the minimization of c over the x-block of a model face.
pub(crate) fn model_lp(model: &PolyModel, c: &[Rational]) -> (ModelSystem, LinearProgram) {
    let sys = model.system();
    let objective: RatVector = sys
        .vars
        .iter()
        .map(|var| match var {
            ModelVar::X(j) => c[*j].clone(),
            _ => Rational::zero(),
        })
        .collect();
    let lp = LinearProgram {
        constraints: sys.constraints.clone(),
        rhs: sys.rhs.clone(),
        nonneg: sys.nonneg.clone(),
        objective,
    };
    (sys, lp)
}

/// Steepest-descent circuit at x0: minimize c.x over the normalized
/// strictly-feasible face and read the answer off the vertex optimum.
pub fn steepest_descent_circuit(
    poly: &Polyhedron,
    c: &[Rational],
    x0: &[Rational],
) -> Result<SteepestOutcome, Error> {
    let model = build_polytope(poly).restrict_strictly_feasible(poly, x0)?;
    let (sys, lp) = model_lp(&model, c);
    match solve_vertex(&lp) {
        LpOutcome::Infeasible => Ok(SteepestOutcome::NoFeasibleDirection),
        LpOutcome::Unbounded { .. } => unreachable!("the normalized face is a polytope"),
        LpOutcome::Optimal(sol) => {
            if !sol.value.is_negative() {
                return Ok(SteepestOutcome::NoDescent);
            }
            let pt = model.point_from_solution(&sys, &sol.point);
            let circuit = model
                .extract_circuit(&pt)?
                .expect("negative objective value rules out T-type optima");
            // The LP value is the steepness because ||Bg||_1 = 1 on the face;
            // recompute from the coprime-integer circuit as a cross-check.
            assert_eq!(circuit.steepness(c), sol.value);
            Ok(SteepestOutcome::Descent {
                circuit,
                steepness: sol.value,
            })
        }
    }
}

/// Exact maximal step length: min over rows with (Bg)_i > 0 of
/// (d_i - (Bx)_i) / (Bg)_i, or Unbounded when no row increases.
pub fn maximal_step(poly: &Polyhedron, x: &[Rational], g: &Circuit) -> Result<MaxStep, Error> {
    let active = poly.active_rows(x)?;
    if active.iter().any(|&i| g.image()[i].is_positive()) {
        return Err(Error::NotStrictlyFeasible);
    }
    let image_x = poly.ineq_mat().mul_vec(x);
    let mut best: Option<Rational> = None;
    for (i, coeff) in g.image().iter().enumerate() {
        if !coeff.is_positive() {
            continue;
        }
        let ratio = (&poly.ineq_rhs()[i] - &image_x[i]) / coeff;
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    Ok(match best {
        Some(alpha) => MaxStep::Bounded(alpha),
        None => MaxStep::Unbounded,
    })
}

/// Runs steepest-descent augmentation with maximal steps from x0 until no
/// descent direction remains (Optimal) or an unbounded ray is found.
pub fn solve_steepest_descent(
    poly: &Polyhedron,
    c: &[Rational],
    x0: &[Rational],
) -> Result<AugmentationTrace, Error> {
    let mut x = x0.to_vec();
    let mut steps = Vec::new();
    let mut used: BTreeSet<Vec<crate::exactnum::Int>> = BTreeSet::new();
    let terminal = loop {
        match steepest_descent_circuit(poly, c, &x)? {
            SteepestOutcome::NoFeasibleDirection | SteepestOutcome::NoDescent => {
                break Terminal::Optimal {
                    value: dot(c, &x),
                    point: x,
                };
            }
            SteepestOutcome::Descent { circuit, steepness } => {
                assert!(
                    used.insert(circuit.direction().to_vec()),
                    "steepest-descent augmentation revisited a circuit"
                );
                match maximal_step(poly, &x, &circuit)? {
                    MaxStep::Unbounded => break Terminal::Unbounded { certificate: circuit },
                    MaxStep::Bounded(alpha) => {
                        debug_assert!(alpha.is_positive());
                        let next = add_scaled(&x, &alpha, &circuit.direction_rat());
                        steps.push(AugmentStep {
                            point: x,
                            circuit,
                            step: alpha,
                            steepness,
                        });
                        x = next;
                    }
                }
            }
        }
    };
    Ok(AugmentationTrace {
        start: x0.to_vec(),
        steps,
        terminal,
    })
}

/// Exact baseline: min c.x over P solved directly as one linear program
/// (x free, one slack per inequality row). Independent of the augmentation
/// path; used to cross-check terminal values.
pub fn solve_lp_direct(poly: &Polyhedron, c: &[Rational]) -> LpOutcome {
    let n = poly.dim();
    let m_a = poly.eq_mat().rows();
    let m_b = poly.ineq_mat().rows();
    let total = n + m_b;
    let mut mat = RatMatrix::zero(m_a + m_b, total);
    let mut rhs = Vec::with_capacity(m_a + m_b);
    for r in 0..m_a {
        for j in 0..n {
            *mat.at_mut(r, j) = poly.eq_mat().at(r, j).clone();
        }
        rhs.push(poly.eq_rhs()[r].clone());
    }
    for i in 0..m_b {
        for j in 0..n {
            *mat.at_mut(m_a + i, j) = poly.ineq_mat().at(i, j).clone();
        }
        *mat.at_mut(m_a + i, n + i) = rat(1);
        rhs.push(poly.ineq_rhs()[i].clone());
    }
    let mut nonneg = vec![false; n];
    nonneg.extend(core::iter::repeat_n(true, m_b));
    let mut objective = c.to_vec();
    objective.extend(core::iter::repeat_n(Rational::zero(), m_b));
    solve_vertex(&LinearProgram {
        constraints: mat,
        rhs,
        nonneg,
        objective,
    })
}

/// Verification report for an augmentation trace. Any violation is an
/// implementation bug, not a property of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    /// Points feasible, arithmetic replayed exactly, terminal consistent.
    pub exact_and_feasible: bool,
    /// Steepness values non-decreasing, i.e. magnitudes non-increasing.
    pub steepness_monotone: bool,
    /// No signed circuit direction repeats.
    pub no_repeated_circuit: bool,
    /// Whenever two step images lie in different closed orthants, steepness
    /// strictly increased between them.
    pub orthant_change_strict: bool,
    /// Step count at most |C(A, B)|, when that cardinality is supplied.
    pub within_circuit_bound: Option<bool>,
    pub violations: Vec<String>,
}

impl TraceReport {
    pub fn all_passed(&self) -> bool {
        self.exact_and_feasible
            && self.steepness_monotone
            && self.no_repeated_circuit
            && self.orthant_change_strict
            && self.within_circuit_bound.unwrap_or(true)
    }
}

/// Replays and checks a trace against the polyhedron and objective.
pub fn verify_trace(
    poly: &Polyhedron,
    c: &[Rational],
    trace: &AugmentationTrace,
    circuit_cardinality: Option<usize>,
) -> TraceReport {
    let mut violations = Vec::new();
    let mut exact_and_feasible = true;

    let mut x = trace.start.clone();
    for (k, step) in trace.steps.iter().enumerate() {
        if step.point != x {
            exact_and_feasible = false;
            violations.push(format!("step {k}: recorded point differs from replay"));
        }
        if !poly.contains(&x) {
            exact_and_feasible = false;
            violations.push(format!("step {k}: point outside polyhedron"));
        }
        if step.steepness != step.circuit.steepness(c) {
            exact_and_feasible = false;
            violations.push(format!("step {k}: steepness does not match circuit"));
        }
        if !step.step.is_positive() {
            exact_and_feasible = false;
            violations.push(format!("step {k}: nonpositive step length"));
        }
        x = add_scaled(&x, &step.step, &step.circuit.direction_rat());
    }
    match &trace.terminal {
        Terminal::Optimal { point, value } => {
            if *point != x || *value != dot(c, &x) || !poly.contains(&x) {
                exact_and_feasible = false;
                violations.push("terminal point/value inconsistent with replay".into());
            }
        }
        Terminal::Unbounded { certificate } => {
            let ok = matches!(maximal_step(poly, &x, certificate), Ok(MaxStep::Unbounded))
                && certificate.steepness(c).is_negative();
            if !ok {
                exact_and_feasible = false;
                violations.push("terminal certificate is not an unbounded descent ray".into());
            }
        }
    }

    let mut steepness_monotone = true;
    for pair in trace.steps.windows(2) {
        if pair[0].steepness > pair[1].steepness {
            steepness_monotone = false;
            violations.push("steepness magnitude increased between steps".into());
        }
    }

    let mut no_repeated_circuit = true;
    let mut seen = BTreeSet::new();
    for step in &trace.steps {
        if !seen.insert(step.circuit.direction().to_vec()) {
            no_repeated_circuit = false;
            violations.push("a circuit was used twice".into());
        }
    }

    let mut orthant_change_strict = true;
    for j in 1..trace.steps.len() {
        for k in 0..j {
            let a = &trace.steps[k];
            let b = &trace.steps[j];
            let same_orthant = a
                .image_pairs(b)
                .all(|(p, q)| !(p.is_positive() && q.is_negative()) && !(p.is_negative() && q.is_positive()));
            if !same_orthant && a.steepness >= b.steepness {
                orthant_change_strict = false;
                violations.push(format!(
                    "steps {k} and {j} changed orthant without strict steepness increase"
                ));
            }
        }
    }

    let within_circuit_bound =
        circuit_cardinality.map(|bound| trace.steps.len() <= bound);
    if within_circuit_bound == Some(false) {
        violations.push("more augmentations than circuits".into());
    }

    TraceReport {
        exact_and_feasible,
        steepness_monotone,
        no_repeated_circuit,
        orthant_change_strict,
        within_circuit_bound,
        violations,
    }
}

impl AugmentStep {
    fn image_pairs<'a>(
        &'a self,
        other: &'a AugmentStep,
    ) -> impl Iterator<Item = (&'a Rational, &'a Rational)> {
        self.circuit.image().iter().zip(other.circuit.image())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_enum::naive_circuits;
    use crate::exactnum::{int_vec_to_rat, one_norm, Int};
    use crate::polyhedron::{gen_random, triangle, Polyhedron};
    use crate::rng::SplitMix64;
    use crate::vertex_enum::feasible_circuits;

    fn half_line() -> Polyhedron {
        // {x >= 0} in one dimension.
        Polyhedron::new(
            RatMatrix::zero(0, 1),
            vec![],
            RatMatrix::from_i64_rows(&[&[-1]], 1),
            vec![rat(0)],
        )
        .unwrap()
    }

    #[test]
    fn steepest_circuit_at_origin() {
        let t = triangle();
        let c = [rat(-1), rat(-2)];
        match steepest_descent_circuit(&t, &c, &[rat(0), rat(0)]).unwrap() {
            SteepestOutcome::Descent { circuit, steepness } => {
                assert_eq!(circuit.direction(), &[Int::from(0), Int::from(1)]);
                assert_eq!(steepness, rat(-1));
            }
            other => panic!("expected descent, got {other:?}"),
        }
    }

    #[test]
    fn no_descent_at_optimum_and_for_zero_objective() {
        let t = triangle();
        let c = [rat(-1), rat(-2)];
        assert_eq!(
            steepest_descent_circuit(&t, &c, &[rat(0), rat(1)]).unwrap(),
            SteepestOutcome::NoDescent
        );
        assert_eq!(
            steepest_descent_circuit(&t, &[rat(0), rat(0)], &[rat(0), rat(0)]).unwrap(),
            SteepestOutcome::NoDescent
        );
    }

    #[test]
    fn maximal_step_examples() {
        let t = triangle();
        let origin = [rat(0), rat(0)];
        let up = t.circuit_from_direction(&[rat(0), rat(1)]).unwrap();
        assert_eq!(
            maximal_step(&t, &origin, &up).unwrap(),
            MaxStep::Bounded(rat(1))
        );
        let right = t.circuit_from_direction(&[rat(1), rat(0)]).unwrap();
        assert_eq!(
            maximal_step(&t, &origin, &right).unwrap(),
            MaxStep::Bounded(rat(1))
        );
        let down = up.negated();
        assert_eq!(
            maximal_step(&t, &origin, &down),
            Err(Error::NotStrictlyFeasible)
        );

        let hl = half_line();
        let ray = hl.circuit_from_direction(&[rat(1)]).unwrap();
        assert_eq!(maximal_step(&hl, &[rat(0)], &ray).unwrap(), MaxStep::Unbounded);
    }

    #[test]
    fn triangle_solve_takes_one_step() {
        let t = triangle();
        let c = [rat(-1), rat(-2)];
        let trace = solve_steepest_descent(&t, &c, &[rat(0), rat(0)]).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].circuit.direction(), &[Int::from(0), Int::from(1)]);
        assert_eq!(trace.steps[0].step, rat(1));
        match &trace.terminal {
            Terminal::Optimal { point, value } => {
                assert_eq!(point, &vec![rat(0), rat(1)]);
                assert_eq!(*value, rat(-2));
            }
            other => panic!("expected optimal terminal, got {other:?}"),
        }
        let report = verify_trace(&t, &c, &trace, Some(6));
        assert!(report.all_passed(), "{:?}", report.violations);
    }

    #[test]
    fn zero_objective_takes_zero_steps() {
        let t = triangle();
        let trace = solve_steepest_descent(&t, &[rat(0), rat(0)], &[rat(0), rat(0)]).unwrap();
        assert!(trace.steps.is_empty());
        assert!(matches!(trace.terminal, Terminal::Optimal { ref value, .. } if value.is_zero()));
    }

    #[test]
    fn unbounded_half_line() {
        let hl = half_line();
        let trace = solve_steepest_descent(&hl, &[rat(-1)], &[rat(0)]).unwrap();
        match &trace.terminal {
            Terminal::Unbounded { certificate } => {
                assert_eq!(certificate.direction(), &[Int::from(1)]);
            }
            other => panic!("expected unbounded terminal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_start_rejected() {
        let t = triangle();
        assert_eq!(
            solve_steepest_descent(&t, &[rat(-1), rat(0)], &[rat(2), rat(2)]),
            Err(Error::PointNotInPolyhedron)
        );
    }

    #[test]
    fn degenerate_pyramid_apex_escapes() {
        // Four lateral facets meet at the apex of a pyramid in R^3; the
        // steepest-descent oracle must still produce a strictly feasible
        // circuit with a positive maximal step.
        let pyramid = Polyhedron::new(
            RatMatrix::zero(0, 3),
            vec![],
            RatMatrix::from_i64_rows(
                &[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1], &[0, 0, -1]],
                3,
            ),
            vec![rat(0), rat(0), rat(0), rat(0), rat(1)],
        )
        .unwrap();
        let apex = [rat(0), rat(0), rat(0)];
        assert_eq!(pyramid.active_rows(&apex).unwrap().len(), 4);
        let c = [rat(0), rat(0), rat(1)];
        match steepest_descent_circuit(&pyramid, &c, &apex).unwrap() {
            SteepestOutcome::Descent { circuit, steepness } => {
                assert!(steepness.is_negative());
                match maximal_step(&pyramid, &apex, &circuit).unwrap() {
                    MaxStep::Bounded(alpha) => assert!(alpha.is_positive()),
                    MaxStep::Unbounded => panic!("pyramid is bounded below"),
                }
            }
            other => panic!("expected descent at degenerate apex, got {other:?}"),
        }
    }

    #[test]
    fn steepest_beats_every_feasible_direction() {
        // The returned steepness is a lower bound for c.u / ||Bu||_1 over
        // all strictly feasible circuits and their conic combinations.
        let mut rng = SplitMix64::new(71);
        for seed in [1, 6, 12] {
            let inst = gen_random(3, 0, 4, seed, 3).unwrap();
            let poly = &inst.poly;
            let x0 = &inst.feasible_point;
            let c: RatVector = (0..3).map(|_| rat(rng.int_in(-4, 4))).collect();
            let feasible = feasible_circuits(poly, x0).unwrap();
            let best = match steepest_descent_circuit(poly, &c, x0).unwrap() {
                SteepestOutcome::Descent { steepness, .. } => steepness,
                SteepestOutcome::NoDescent => rat(0),
                SteepestOutcome::NoFeasibleDirection => continue,
            };
            let members: Vec<_> = feasible.iter().collect();
            for g in &members {
                assert!(best <= g.steepness(&c));
            }
            for _ in 0..10 {
                if members.len() < 2 {
                    break;
                }
                let a = members[rng.index(members.len())];
                let b = members[rng.index(members.len())];
                let u = add_scaled(
                    &int_vec_to_rat(a.direction()),
                    &rat(rng.int_in(1, 3)),
                    &int_vec_to_rat(b.direction()),
                );
                if crate::exactnum::is_zero_vec(&u) {
                    continue;
                }
                let image = poly.ineq_mat().mul_vec(&u);
                if crate::exactnum::is_zero_vec(&image) {
                    continue;
                }
                assert!(best <= dot(&c, &u) / one_norm(&image));
            }
        }
    }

    #[test]
    fn terminal_value_matches_direct_lp() {
        let mut rng = SplitMix64::new(5);
        for seed in 0..8u64 {
            // Random bounded instance: a box plus extra random rows.
            let inst = bounded_instance(3, 3, seed, 3);
            let poly = &inst.poly;
            let c: RatVector = (0..3).map(|_| rat(rng.int_in(-5, 5))).collect();
            let trace = solve_steepest_descent(poly, &c, &inst.feasible_point).unwrap();
            let Terminal::Optimal { value, .. } = &trace.terminal else {
                panic!("bounded instance cannot be unbounded");
            };
            let LpOutcome::Optimal(direct) = solve_lp_direct(poly, &c) else {
                panic!("direct solve must be optimal");
            };
            assert_eq!(*value, direct.value, "seed {seed}");
            let full = naive_circuits(poly);
            let report = verify_trace(poly, &c, &trace, Some(full.cardinality()));
            assert!(report.all_passed(), "seed {seed}: {:?}", report.violations);
        }
    }

    #[test]
    fn corrupted_trace_fails_verification() {
        let t = triangle();
        let c = [rat(-1), rat(-2)];
        let mut trace = solve_steepest_descent(&t, &c, &[rat(0), rat(0)]).unwrap();
        let duplicated = trace.steps[0].clone();
        trace.steps.push(duplicated);
        let report = verify_trace(&t, &c, &trace, None);
        assert!(!report.no_repeated_circuit);
        assert!(!report.all_passed());
    }

    /// Random pointed instance wrapped in a box so that every objective is
    /// bounded; feasibility point comes from the generator.
    pub(crate) fn bounded_instance(
        n: usize,
        extra_rows: usize,
        seed: u64,
        magnitude: i64,
    ) -> crate::polyhedron::RandomPolyhedron {
        let inst = gen_random(n, 0, extra_rows, seed, magnitude).unwrap();
        let poly = &inst.poly;
        let bound = rat(10 * magnitude);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for r in 0..poly.ineq_mat().rows() {
            rows.push(poly.ineq_mat().row(r).to_vec());
            rhs.push(poly.ineq_rhs()[r].clone());
        }
        for j in 0..n {
            let mut plus = vec![rat(0); n];
            plus[j] = rat(1);
            rows.push(plus);
            rhs.push(bound.clone());
            let mut minus = vec![rat(0); n];
            minus[j] = rat(-1);
            rows.push(minus);
            rhs.push(bound.clone());
        }
        let boxed = Polyhedron::new(
            RatMatrix::zero(0, n),
            vec![],
            RatMatrix::from_rows(rows, n),
            rhs,
        )
        .unwrap();
        debug_assert!(boxed.contains(&inst.feasible_point));
        crate::polyhedron::RandomPolyhedron {
            poly: boxed,
            feasible_point: inst.feasible_point,
        }
    }
}
