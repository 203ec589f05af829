//! General polyhedra `P = {x : Ax = b, Bx <= d}` together with the circuit
//! and circuit-set types, the rank test for circuit-hood, and seeded
//! instance generators.
//!
//! A polyhedron is kept pointed: rank([A; B]) = n. Circuits are nonzero
//! kernel elements of A, normalized to coprime integers, whose image under B
//! is support-minimal; the rank characterization (`is_circuit`) decides this
//! exactly. Zero rows of B are rejected at construction: such a row is
//! either vacuous or infeasible and corrupts support arguments.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exactnum::{
    dot, int_vec_to_rat, is_zero_vec, normalize_primitive, one_norm, rat, Int, RatMatrix,
    RatVector, Rational,
};
use crate::rng::SplitMix64;
use crate::Error;

/// Pointed polyhedron `{x : Ax = b, Bx <= d}`. The equality system may be
/// empty (m_A = 0, in which case ker(A) is all of R^n); at least one
/// inequality row is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    eq: RatMatrix,
    eq_rhs: RatVector,
    ineq: RatMatrix,
    ineq_rhs: RatVector,
}

impl Polyhedron {
    /// Builds a polyhedron, checking mutual dimension consistency and
    /// rejecting zero rows of B. Pointedness is checked by [`validate`].
    ///
    /// [`validate`]: Polyhedron::validate
    pub fn new(
        eq: RatMatrix,
        eq_rhs: RatVector,
        ineq: RatMatrix,
        ineq_rhs: RatVector,
    ) -> Result<Self, Error> {
        if ineq.rows() == 0 {
            return Err(Error::DimensionMismatch("at least one inequality row required"));
        }
        if eq.cols() != ineq.cols() {
            return Err(Error::DimensionMismatch("A and B column counts differ"));
        }
        if eq_rhs.len() != eq.rows() {
            return Err(Error::DimensionMismatch("b length != rows of A"));
        }
        if ineq_rhs.len() != ineq.rows() {
            return Err(Error::DimensionMismatch("d length != rows of B"));
        }
        for r in 0..ineq.rows() {
            if ineq.is_zero_row(r) {
                return Err(Error::ZeroRow(r));
            }
        }
        Ok(Polyhedron {
            eq,
            eq_rhs,
            ineq,
            ineq_rhs,
        })
    }

    /// Dimension n of the ambient space.
    pub fn dim(&self) -> usize {
        self.ineq.cols()
    }

    pub fn eq_mat(&self) -> &RatMatrix {
        &self.eq
    }

    pub fn eq_rhs(&self) -> &RatVector {
        &self.eq_rhs
    }

    pub fn ineq_mat(&self) -> &RatMatrix {
        &self.ineq
    }

    pub fn ineq_rhs(&self) -> &RatVector {
        &self.ineq_rhs
    }

    /// The stacked constraint matrix [A; B].
    pub fn stacked(&self) -> RatMatrix {
        self.eq.vstack(&self.ineq)
    }

    /// Ok iff rank([A; B]) = n, i.e. the polyhedron is pointed.
    pub fn validate(&self) -> Result<(), Error> {
        if self.stacked().rank() == self.dim() {
            Ok(())
        } else {
            Err(Error::NotPointed)
        }
    }

    /// Exact membership test: Ax = b and Bx <= d componentwise.
    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        if self.eq.mul_vec(x) != self.eq_rhs {
            return false;
        }
        self.ineq
            .mul_vec(x)
            .iter()
            .zip(&self.ineq_rhs)
            .all(|(lhs, rhs)| lhs <= rhs)
    }

    /// Indices i with (Bx)_i = d_i, for a feasible x.
    pub fn active_rows(&self, x: &[Rational]) -> Result<Vec<usize>, Error> {
        if !self.contains(x) {
            return Err(Error::PointNotInPolyhedron);
        }
        Ok(self
            .ineq
            .mul_vec(x)
            .iter()
            .zip(&self.ineq_rhs)
            .enumerate()
            .filter(|(_, (lhs, rhs))| lhs == rhs)
            .map(|(i, _)| i)
            .collect())
    }

    /// Rank characterization of circuit directions: g is a circuit direction
    /// iff g != 0, Ag = 0, and rank([A; B']) = n - 1 where B' is the maximal
    /// row-submatrix of B with B'g = 0.
    pub fn is_circuit(&self, g: &[Rational]) -> bool {
        is_circuit_of(&self.eq, &self.ineq, g)
    }

    /// Normalizes a direction to a checked [`Circuit`].
    pub fn circuit_from_direction(&self, v: &[Rational]) -> Result<Circuit, Error> {
        Circuit::new(&self.eq, &self.ineq, v)
    }
}

pub(crate) fn is_circuit_of(eq: &RatMatrix, ineq: &RatMatrix, g: &[Rational]) -> bool {
    let n = ineq.cols();
    if g.len() != n || is_zero_vec(g) {
        return false;
    }
    if !is_zero_vec(&eq.mul_vec(g)) {
        return false;
    }
    let image = ineq.mul_vec(g);
    let zero_rows: Vec<usize> = (0..ineq.rows()).filter(|&i| image[i].is_zero()).collect();
    let tight = ineq.select_rows(&zero_rows);
    eq.vstack(&tight).rank() == n - 1
}

/// A circuit: coprime integer direction with its cached image Bg.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    direction: Vec<Int>,
    image: RatVector,
}

impl Circuit {
    /// Normalizes v to coprime integers and checks circuit-hood against the
    /// given constraint matrices. Panics if the normalized direction fails
    /// the rank characterization; callers only construct from directions
    /// already known to be circuit directions.
    pub(crate) fn new(eq: &RatMatrix, ineq: &RatMatrix, v: &[Rational]) -> Result<Circuit, Error> {
        let direction = normalize_primitive(v)?;
        let as_rat = int_vec_to_rat(&direction);
        assert!(
            is_circuit_of(eq, ineq, &as_rat),
            "direction is not a circuit of the polyhedron"
        );
        let image = ineq.mul_vec(&as_rat);
        Ok(Circuit { direction, image })
    }

    pub fn direction(&self) -> &[Int] {
        &self.direction
    }

    /// Cached image Bg.
    pub fn image(&self) -> &[Rational] {
        &self.image
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// True when the first nonzero entry of the direction is positive.
    pub fn is_canonical(&self) -> bool {
        self.direction
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_positive())
    }

    pub fn negated(&self) -> Circuit {
        Circuit {
            direction: self.direction.iter().map(|x| -x).collect(),
            image: self.image.iter().map(|x| -x).collect(),
        }
    }

    /// The member of {g, -g} whose first nonzero entry is positive.
    pub fn canonicalized(&self) -> Circuit {
        if self.is_canonical() {
            self.clone()
        } else {
            self.negated()
        }
    }

    /// Steepness c.g / ||Bg||_1 with respect to an objective c.
    pub fn steepness(&self, c: &[Rational]) -> Rational {
        dot(c, &int_vec_to_rat(&self.direction)) / one_norm(&self.image)
    }

    /// The direction as a rational vector.
    pub fn direction_rat(&self) -> RatVector {
        int_vec_to_rat(&self.direction)
    }
}

/// An ordered set of circuits.
///
/// In symmetric mode members are stored as canonical representatives (first
/// nonzero entry positive) and cardinality counts both members of each
/// opposite pair. Signed mode stores members as-is; the strictly feasible
/// and sign-compatible subsets are not symmetric, so their sets keep signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSet {
    members: BTreeSet<Circuit>,
    symmetric: bool,
}

impl CircuitSet {
    /// Set of canonical +/- pair representatives.
    pub fn symmetric() -> Self {
        CircuitSet {
            members: BTreeSet::new(),
            symmetric: true,
        }
    }

    /// Set of signed circuits.
    pub fn signed() -> Self {
        CircuitSet {
            members: BTreeSet::new(),
            symmetric: false,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Inserts a circuit; in symmetric mode the canonical representative is
    /// stored, so inserting g and -g yields a single member.
    pub fn insert(&mut self, c: Circuit) {
        let c = if self.symmetric { c.canonicalized() } else { c };
        self.members.insert(c);
    }

    pub fn contains(&self, c: &Circuit) -> bool {
        if self.symmetric {
            self.members.contains(&c.canonicalized())
        } else {
            self.members.contains(c)
        }
    }

    /// Stored member count (representatives in symmetric mode).
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Total circuit count: both members of each pair in symmetric mode.
    pub fn cardinality(&self) -> usize {
        if self.symmetric {
            2 * self.members.len()
        } else {
            self.members.len()
        }
    }

    /// Members in lexicographic direction order.
    pub fn iter(&self) -> impl Iterator<Item = &Circuit> {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &CircuitSet) -> bool {
        debug_assert_eq!(self.symmetric, other.symmetric);
        self.members.is_subset(&other.members)
    }
}

/// A seeded random instance with the feasible point it was built around.
#[derive(Debug, Clone)]
pub struct RandomPolyhedron {
    pub poly: Polyhedron,
    pub feasible_point: RatVector,
}

/// Deterministic random pointed polyhedron with integer entries in
/// [-magnitude, magnitude]. The right-hand sides are chosen around a random
/// integer point x0 (b := A x0, d := B x0 + positive slack), so the instance
/// is feasible by construction; matrices are redrawn until pointed.
pub fn gen_random(
    n: usize,
    m_a: usize,
    m_b: usize,
    seed: u64,
    magnitude: i64,
) -> Result<RandomPolyhedron, Error> {
    if n == 0 || m_b == 0 || m_a + m_b < n || magnitude < 1 {
        return Err(Error::InvalidDimensions);
    }
    let mut rng = SplitMix64::new(seed);
    loop {
        let eq = RatMatrix::from_rows(
            (0..m_a)
                .map(|_| (0..n).map(|_| rat(rng.int_in(-magnitude, magnitude))).collect())
                .collect(),
            n,
        );
        let mut ineq_rows: Vec<RatVector> = Vec::with_capacity(m_b);
        for _ in 0..m_b {
            loop {
                let row: RatVector =
                    (0..n).map(|_| rat(rng.int_in(-magnitude, magnitude))).collect();
                if !is_zero_vec(&row) {
                    ineq_rows.push(row);
                    break;
                }
            }
        }
        let ineq = RatMatrix::from_rows(ineq_rows, n);
        if eq.vstack(&ineq).rank() != n {
            continue;
        }
        let x0: RatVector = (0..n).map(|_| rat(rng.int_in(-magnitude, magnitude))).collect();
        let eq_rhs = eq.mul_vec(&x0);
        let ineq_rhs: RatVector = ineq
            .mul_vec(&x0)
            .into_iter()
            .map(|v| v + rat(rng.int_in(1, magnitude.max(1))))
            .collect();
        let poly = Polyhedron::new(eq, eq_rhs, ineq, ineq_rhs)?;
        debug_assert!(poly.validate().is_ok());
        debug_assert!(poly.contains(&x0));
        return Ok(RandomPolyhedron {
            poly,
            feasible_point: x0,
        });
    }
}

/// Dual transportation polyhedron in variables (u in R^p, v in R^q):
/// inequality rows u_i + v_j <= c_ij for all (i, j) in row-major order, and
/// the pinning equality u_1 = 0 that makes the instance pointed while
/// keeping the constraint matrix totally unimodular.
pub fn gen_dual_transportation(p: usize, q: usize, costs: &RatMatrix) -> Polyhedron {
    assert!(p > 0 && q > 0, "p and q must be positive");
    assert_eq!(costs.rows(), p, "costs row count");
    assert_eq!(costs.cols(), q, "costs column count");
    let n = p + q;
    let mut eq = RatMatrix::zero(1, n);
    *eq.at_mut(0, 0) = rat(1);
    let mut ineq_rows = Vec::with_capacity(p * q);
    let mut ineq_rhs = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            let mut row = vec![rat(0); n];
            row[i] = rat(1);
            row[p + j] = rat(1);
            ineq_rows.push(row);
            ineq_rhs.push(costs.at(i, j).clone());
        }
    }
    let poly = Polyhedron::new(eq, vec![rat(0)], RatMatrix::from_rows(ineq_rows, n), ineq_rhs)
        .expect("dual transportation system is dimensionally consistent");
    debug_assert!(poly.validate().is_ok());
    poly
}

/// Shared test fixture: the triangle {x >= 0, x1 + x2 <= 1}.
#[doc(hidden)]
pub fn triangle() -> Polyhedron {
    Polyhedron::new(
        RatMatrix::zero(0, 2),
        vec![],
        RatMatrix::from_i64_rows(&[&[-1, 0], &[0, -1], &[1, 1]], 2),
        vec![rat(0), rat(0), rat(1)],
    )
    .unwrap()
}

/// Componentwise sign compatibility of Bg with Bu, including the support
/// condition: (Bu)_i = 0 forces (Bg)_i = 0.
pub fn image_sign_compatible(image_g: &[Rational], image_u: &[Rational]) -> bool {
    debug_assert_eq!(image_g.len(), image_u.len());
    image_g.iter().zip(image_u).all(|(g, u)| {
        if u.is_zero() {
            g.is_zero()
        } else {
            !(g.is_positive() && u.is_negative()) && !(g.is_negative() && u.is_positive())
        }
    })
}

/// Strict feasibility of a circuit at x: no active row may increase.
pub fn circuit_strictly_feasible(poly: &Polyhedron, x: &[Rational], c: &Circuit) -> bool {
    match poly.active_rows(x) {
        Ok(active) => active.iter().all(|&i| !c.image()[i].is_positive()),
        Err(_) => false,
    }
}
