//! The polyhedral model: a cone (or, normalized, a polytope) over variables
//! (x, y+, y-) whose extreme rays and vertices encode the circuits of the
//! original polyhedron, together with the face restrictions that select
//! strictly feasible or sign-compatible circuit subsets.
//!
//! The general model carries the equalities Ax = 0 and Bx = y+ - y- with
//! y+, y- >= 0; the normalization row sum(y+) + sum(y-) = 1 turns the cone
//! into a polytope whose vertices split into S-type points (circuit
//! carriers, y+ - y- != 0) and at most m_B T-type points (y+ = y-). Face
//! restrictions are stored as fixed-to-zero index sets on y+ and y- and are
//! applied as variable eliminations by the solvers, which keeps basis sizes
//! small.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exactnum::{is_zero_vec, rat, sub_vec, RatMatrix, RatVector, Rational};
use crate::polyhedron::{Circuit, Polyhedron};
use crate::Error;

/// Variable layout of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// (x, y+, y-) over a general polyhedron.
    General,
    /// (y+, y-) only, for a standard-form constraint matrix; the circuit
    /// carrier is y+ - y- itself.
    Standard,
}

/// One column of the assembled constraint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelVar {
    X(usize),
    YPlus(usize),
    YMinus(usize),
}

/// The constraint system of the model cone/polytope plus face restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyModel {
    kind: ModelKind,
    n: usize,
    m_b: usize,
    eq_a: RatMatrix,
    ineq: RatMatrix,
    normalized: bool,
    zero_plus: BTreeSet<usize>,
    zero_minus: BTreeSet<usize>,
}

/// A point of the model in full coordinates, fixed-zero entries included.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelPoint {
    pub x: RatVector,
    pub y_plus: RatVector,
    pub y_minus: RatVector,
}

impl ModelPoint {
    pub fn y_diff(&self) -> RatVector {
        sub_vec(&self.y_plus, &self.y_minus)
    }

    /// T-type points carry no circuit: y+ - y- = 0.
    pub fn is_t_type(&self) -> bool {
        self.y_plus == self.y_minus
    }
}

/// The materialized equality system over the surviving (non-fixed) columns.
#[derive(Debug, Clone)]
pub struct ModelSystem {
    pub vars: Vec<ModelVar>,
    pub constraints: RatMatrix,
    pub rhs: RatVector,
    pub nonneg: Vec<bool>,
}

/// Model cone for a general polyhedron; the apex (all variables zero) is
/// always feasible and the cone is pointed whenever P is.
pub fn build_cone(poly: &Polyhedron) -> PolyModel {
    assert!(poly.validate().is_ok(), "polyhedron must be pointed");
    PolyModel {
        kind: ModelKind::General,
        n: poly.dim(),
        m_b: poly.ineq_mat().rows(),
        eq_a: poly.eq_mat().clone(),
        ineq: poly.ineq_mat().clone(),
        normalized: false,
        zero_plus: BTreeSet::new(),
        zero_minus: BTreeSet::new(),
    }
}

/// Model polytope: the cone cut with sum(y+) + sum(y-) = 1.
pub fn build_polytope(poly: &Polyhedron) -> PolyModel {
    build_cone(poly).with_normalization()
}

/// Reduced model over (y+, y-) for a standard-form constraint matrix:
/// equalities A(y+ - y-) = 0. With the normalization row it realizes the
/// standard-form circuit polytope.
pub fn build_standard_cone(a: &RatMatrix) -> PolyModel {
    let n = a.cols();
    PolyModel {
        kind: ModelKind::Standard,
        n,
        m_b: n,
        eq_a: a.clone(),
        ineq: RatMatrix::identity(n),
        normalized: false,
        zero_plus: BTreeSet::new(),
        zero_minus: BTreeSet::new(),
    }
}

impl PolyModel {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn eq_mat(&self) -> &RatMatrix {
        &self.eq_a
    }

    pub fn ineq_mat(&self) -> &RatMatrix {
        &self.ineq
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn zero_plus(&self) -> &BTreeSet<usize> {
        &self.zero_plus
    }

    pub fn zero_minus(&self) -> &BTreeSet<usize> {
        &self.zero_minus
    }

    /// Total variable count before eliminations.
    pub fn var_count(&self) -> usize {
        match self.kind {
            ModelKind::General => self.n + 2 * self.m_b,
            ModelKind::Standard => 2 * self.m_b,
        }
    }

    pub fn with_normalization(mut self) -> Self {
        self.normalized = true;
        self
    }

    /// Drops all face restrictions, keeping the base system.
    pub fn clear_restrictions(&mut self) {
        self.zero_plus.clear();
        self.zero_minus.clear();
    }

    /// Face of strictly feasible directions at x0: fixes y+_i = 0 for every
    /// inequality row active at x0.
    pub fn restrict_strictly_feasible(
        &self,
        poly: &Polyhedron,
        x0: &[Rational],
    ) -> Result<PolyModel, Error> {
        debug_assert_eq!(self.kind, ModelKind::General);
        debug_assert_eq!(self.m_b, poly.ineq_mat().rows());
        let active = poly.active_rows(x0)?;
        let mut out = self.clone();
        out.zero_plus.extend(active);
        Ok(out)
    }

    /// Face of circuits sign-compatible with u: for each row i, fixes
    /// y-_i = 0 when (Bu)_i >= 0 and y+_i = 0 when (Bu)_i <= 0 (both at 0).
    pub fn restrict_sign_compatible(&self, u: &[Rational]) -> Result<PolyModel, Error> {
        if u.len() != self.n || is_zero_vec(u) {
            return Err(Error::ZeroVector);
        }
        if !is_zero_vec(&self.eq_a.mul_vec(u)) {
            return Err(Error::NotInKernel);
        }
        let image = self.ineq.mul_vec(u);
        let mut out = self.clone();
        for (i, v) in image.iter().enumerate() {
            if !v.is_negative() {
                out.zero_minus.insert(i);
            }
            if !v.is_positive() {
                out.zero_plus.insert(i);
            }
        }
        Ok(out)
    }

    /// Materializes the equality system over the surviving columns.
    pub fn system(&self) -> ModelSystem {
        let mut vars = Vec::new();
        if self.kind == ModelKind::General {
            vars.extend((0..self.n).map(ModelVar::X));
        }
        for i in 0..self.m_b {
            if !self.zero_plus.contains(&i) {
                vars.push(ModelVar::YPlus(i));
            }
        }
        for i in 0..self.m_b {
            if !self.zero_minus.contains(&i) {
                vars.push(ModelVar::YMinus(i));
            }
        }

        let m_a = self.eq_a.rows();
        let base_rows = match self.kind {
            ModelKind::General => m_a + self.m_b,
            ModelKind::Standard => m_a,
        };
        let total_rows = base_rows + usize::from(self.normalized);

        let mut mat = RatMatrix::zero(total_rows, vars.len());
        let mut rhs = vec![Rational::zero(); total_rows];
        for (col, var) in vars.iter().enumerate() {
            match (self.kind, var) {
                (ModelKind::General, ModelVar::X(j)) => {
                    for r in 0..m_a {
                        *mat.at_mut(r, col) = self.eq_a.at(r, *j).clone();
                    }
                    for i in 0..self.m_b {
                        *mat.at_mut(m_a + i, col) = self.ineq.at(i, *j).clone();
                    }
                }
                (ModelKind::General, ModelVar::YPlus(i)) => {
                    *mat.at_mut(m_a + i, col) = rat(-1);
                }
                (ModelKind::General, ModelVar::YMinus(i)) => {
                    *mat.at_mut(m_a + i, col) = rat(1);
                }
                (ModelKind::Standard, ModelVar::YPlus(i)) => {
                    for r in 0..m_a {
                        *mat.at_mut(r, col) = self.eq_a.at(r, *i).clone();
                    }
                }
                (ModelKind::Standard, ModelVar::YMinus(i)) => {
                    for r in 0..m_a {
                        *mat.at_mut(r, col) = -self.eq_a.at(r, *i).clone();
                    }
                }
                (ModelKind::Standard, ModelVar::X(_)) => unreachable!(),
            }
            if self.normalized && !matches!(var, ModelVar::X(_)) {
                *mat.at_mut(total_rows - 1, col) = rat(1);
            }
        }
        if self.normalized {
            rhs[total_rows - 1] = rat(1);
        }

        let nonneg = vars.iter().map(|v| !matches!(v, ModelVar::X(_))).collect();
        ModelSystem {
            vars,
            constraints: mat,
            rhs,
            nonneg,
        }
    }

    /// Scatters a solution of [`system`](PolyModel::system) back into full
    /// model coordinates, reinstating fixed-zero entries.
    pub fn point_from_solution(&self, sys: &ModelSystem, z: &[Rational]) -> ModelPoint {
        debug_assert_eq!(z.len(), sys.vars.len());
        let mut x = vec![Rational::zero(); self.n];
        let mut y_plus = vec![Rational::zero(); self.m_b];
        let mut y_minus = vec![Rational::zero(); self.m_b];
        for (val, var) in z.iter().zip(&sys.vars) {
            match var {
                ModelVar::X(j) => x[*j] = val.clone(),
                ModelVar::YPlus(i) => y_plus[*i] = val.clone(),
                ModelVar::YMinus(i) => y_minus[*i] = val.clone(),
            }
        }
        if self.kind == ModelKind::Standard {
            x = sub_vec(&y_plus, &y_minus);
        }
        ModelPoint { x, y_plus, y_minus }
    }

    /// Exact membership test for full-coordinate points, fixed-zero sets and
    /// nonnegativity included.
    pub fn point_satisfies(&self, pt: &ModelPoint) -> bool {
        if pt.x.len() != self.n || pt.y_plus.len() != self.m_b || pt.y_minus.len() != self.m_b {
            return false;
        }
        if pt.y_plus.iter().any(Signed::is_negative)
            || pt.y_minus.iter().any(Signed::is_negative)
        {
            return false;
        }
        if self.zero_plus.iter().any(|&i| !pt.y_plus[i].is_zero())
            || self.zero_minus.iter().any(|&i| !pt.y_minus[i].is_zero())
        {
            return false;
        }
        match self.kind {
            ModelKind::General => {
                if !is_zero_vec(&self.eq_a.mul_vec(&pt.x)) {
                    return false;
                }
                if self.ineq.mul_vec(&pt.x) != pt.y_diff() {
                    return false;
                }
            }
            ModelKind::Standard => {
                if !is_zero_vec(&self.eq_a.mul_vec(&pt.y_diff())) {
                    return false;
                }
            }
        }
        if self.normalized {
            let mut total = Rational::zero();
            for v in pt.y_plus.iter().chain(&pt.y_minus) {
                total += v;
            }
            if total != rat(1) {
                return false;
            }
        }
        true
    }

    /// Recovers the circuit encoded by a model point, or None for a T-type
    /// point. A zero x alongside a nonzero y-difference cannot satisfy the
    /// linking rows and signals corruption.
    pub fn extract_circuit(&self, pt: &ModelPoint) -> Result<Option<Circuit>, Error> {
        if pt.is_t_type() {
            return Ok(None);
        }
        if is_zero_vec(&pt.x) {
            return Err(Error::InconsistentPoint);
        }
        Circuit::new(&self.eq_a, &self.ineq, &pt.x).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int_vec_to_rat, one_norm, ratio, Int};
    use crate::polyhedron::{gen_random, triangle};

    fn zp(model: &PolyModel) -> Vec<usize> {
        model.zero_plus().iter().copied().collect()
    }

    fn zm(model: &PolyModel) -> Vec<usize> {
        model.zero_minus().iter().copied().collect()
    }

    #[test]
    fn cone_shape_for_triangle() {
        let model = build_cone(&triangle());
        assert_eq!(model.var_count(), 8);
        let sys = model.system();
        assert_eq!(sys.constraints.rows(), 3); // no A rows, three linking rows
        assert_eq!(sys.vars.len(), 8);
        let apex = ModelPoint {
            x: vec![rat(0); 2],
            y_plus: vec![rat(0); 3],
            y_minus: vec![rat(0); 3],
        };
        assert!(model.point_satisfies(&apex));
    }

    #[test]
    fn cone_rows_include_equalities() {
        let inst = gen_random(3, 1, 3, 5, 3).unwrap();
        let model = build_cone(&inst.poly);
        assert_eq!(model.system().constraints.rows(), 1 + 3);
        let normalized = build_polytope(&inst.poly);
        assert_eq!(normalized.system().constraints.rows(), 1 + 3 + 1);
    }

    #[test]
    fn polytope_excludes_all_zero_y() {
        let model = build_polytope(&triangle());
        let origin = ModelPoint {
            x: vec![rat(0); 2],
            y_plus: vec![rat(0); 3],
            y_minus: vec![rat(0); 3],
        };
        assert!(!model.point_satisfies(&origin));
    }

    #[test]
    fn feasibility_restriction_examples() {
        let t = triangle();
        let model = build_polytope(&t);

        let at_origin = model
            .restrict_strictly_feasible(&t, &[rat(0), rat(0)])
            .unwrap();
        assert_eq!(zp(&at_origin), [0, 1]);
        assert!(zm(&at_origin).is_empty());

        let interior = model
            .restrict_strictly_feasible(&t, &[ratio(1, 4), ratio(1, 4)])
            .unwrap();
        assert!(zp(&interior).is_empty());

        let at_top = model
            .restrict_strictly_feasible(&t, &[rat(0), rat(1)])
            .unwrap();
        assert_eq!(zp(&at_top), [0, 2]);

        assert_eq!(
            model.restrict_strictly_feasible(&t, &[rat(5), rat(5)]),
            Err(Error::PointNotInPolyhedron)
        );
    }

    #[test]
    fn sign_restriction_examples() {
        let model = build_polytope(&triangle());

        // Bu = (-1, -1, 2).
        let face = model.restrict_sign_compatible(&[rat(1), rat(1)]).unwrap();
        assert_eq!(zp(&face), [0, 1]);
        assert_eq!(zm(&face), [2]);

        // Bu = (-1, 0, 1): the zero row fixes both sides.
        let face = model.restrict_sign_compatible(&[rat(1), rat(0)]).unwrap();
        assert_eq!(zp(&face), [0, 1]);
        assert_eq!(zm(&face), [1, 2]);

        assert_eq!(
            model.restrict_sign_compatible(&[rat(0), rat(0)]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn sign_restriction_requires_kernel_membership() {
        let inst = gen_random(3, 1, 3, 9, 3).unwrap();
        let model = build_polytope(&inst.poly);
        // A row of A itself is generically outside ker(A).
        let u: RatVector = inst.poly.eq_mat().row(0).to_vec();
        if !is_zero_vec(&inst.poly.eq_mat().mul_vec(&u)) {
            assert_eq!(model.restrict_sign_compatible(&u), Err(Error::NotInKernel));
        }
    }

    #[test]
    fn sign_face_fixes_everything_the_feasibility_face_does() {
        // For u = x2 - x1 with both points feasible, every y+ index fixed by
        // the feasibility restriction at x1 is fixed by the u-restriction.
        for seed in [4, 8, 15, 16, 23] {
            let inst = gen_random(3, 0, 4, seed, 4).unwrap();
            let poly = &inst.poly;
            let model = build_polytope(poly);
            let x1 = &inst.feasible_point;
            let x2: RatVector = x1.iter().map(|v| v + ratio(1, 3)).collect();
            if !poly.contains(&x2) {
                continue;
            }
            let u = sub_vec(&x2, x1);
            if is_zero_vec(&u) {
                continue;
            }
            let feas = model.restrict_strictly_feasible(poly, x1).unwrap();
            let sign = model.restrict_sign_compatible(&u).unwrap();
            assert!(feas.zero_plus().is_subset(sign.zero_plus()));
        }
    }

    #[test]
    fn extract_circuit_examples() {
        let model = build_polytope(&triangle());

        let t_type = ModelPoint {
            x: vec![rat(0), rat(0)],
            y_plus: vec![ratio(1, 2), rat(0), rat(0)],
            y_minus: vec![ratio(1, 2), rat(0), rat(0)],
        };
        assert!(model.point_satisfies(&t_type));
        assert_eq!(model.extract_circuit(&t_type).unwrap(), None);

        let s_type = ModelPoint {
            x: vec![ratio(1, 2), rat(0)],
            y_plus: vec![rat(0), rat(0), ratio(1, 2)],
            y_minus: vec![ratio(1, 2), rat(0), rat(0)],
        };
        assert!(model.point_satisfies(&s_type));
        let circuit = model.extract_circuit(&s_type).unwrap().unwrap();
        assert_eq!(circuit.direction(), &[Int::from(1), Int::from(0)]);

        let negated = ModelPoint {
            x: vec![ratio(-1, 2), rat(0)],
            y_plus: vec![ratio(1, 2), rat(0), rat(0)],
            y_minus: vec![rat(0), rat(0), ratio(1, 2)],
        };
        let circuit = model.extract_circuit(&negated).unwrap().unwrap();
        assert_eq!(circuit.direction(), &[Int::from(-1), Int::from(0)]);
        assert_eq!(
            circuit.canonicalized().direction(),
            &[Int::from(1), Int::from(0)]
        );

        let corrupted = ModelPoint {
            x: vec![rat(0), rat(0)],
            y_plus: vec![ratio(1, 2), rat(0), rat(0)],
            y_minus: vec![rat(0), rat(0), ratio(1, 2)],
        };
        assert_eq!(
            model.extract_circuit(&corrupted),
            Err(Error::InconsistentPoint)
        );
    }

    #[test]
    fn scaled_circuit_rays_satisfy_the_polytope() {
        let t = triangle();
        let model = build_polytope(&t);
        let g = t.circuit_from_direction(&[rat(1), rat(0)]).unwrap();
        // Scale so that sum(y+) + sum(y-) = ||Bg||_1 = 1.
        let image = g.image();
        let norm = one_norm(image);
        let x: RatVector = int_vec_to_rat(g.direction())
            .iter()
            .map(|v| v / &norm)
            .collect();
        let y_plus: RatVector = image
            .iter()
            .map(|v| if v.is_positive() { v / &norm } else { rat(0) })
            .collect();
        let y_minus: RatVector = image
            .iter()
            .map(|v| if v.is_negative() { -(v / &norm) } else { rat(0) })
            .collect();
        let pt = ModelPoint { x, y_plus, y_minus };
        assert!(model.point_satisfies(&pt));
    }

    #[test]
    fn standard_cone_shape() {
        let a = RatMatrix::from_i64_rows(&[&[1, 1, 1]], 3);
        let model = build_standard_cone(&a).with_normalization();
        assert_eq!(model.var_count(), 6);
        let sys = model.system();
        assert_eq!(sys.constraints.rows(), 2); // one equality + normalization
        assert!(sys.nonneg.iter().all(|&b| b));
    }
}
